#include "rlintro/qfunction_io.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace rlintro {

namespace {

using nlohmann::json;

json to_json(const QTable& table) {
    json entries = json::array();
    for (const auto& [obs, q] : table.sorted_entries()) {
        entries.push_back({{"obs", {obs.x, obs.y, obs.dist_bin}}, {"q", q}});
    }
    return {{"kind", "tabular"},
            {"version", 1},
            {"default", table.default_value()},
            {"entries", std::move(entries)}};
}

json to_json(const MlpQNetwork& net) {
    json layers = json::array();
    for (const auto& layer : net.layers()) {
        std::vector<double> w;
        w.reserve(static_cast<std::size_t>(layer.weights.size()));
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
                w.push_back(layer.weights(r, c));
            }
        }
        std::vector<double> b(layer.bias.data(), layer.bias.data() + layer.bias.size());
        layers.push_back({{"rows", layer.weights.rows()},
                          {"cols", layer.weights.cols()},
                          {"w", std::move(w)},
                          {"b", std::move(b)}});
    }
    return {{"kind", "mlp"},
            {"version", 1},
            {"side_length", net.side_length()},
            {"layers", std::move(layers)}};
}

std::unique_ptr<QFunction> tabular_from_json(const json& j) {
    auto table = std::make_unique<QTable>(j.at("default").get<double>());
    for (const auto& entry : j.at("entries")) {
        const auto& o = entry.at("obs");
        if (o.size() != 3) throw std::runtime_error("tabular entry obs must have 3 components");
        const auto& q = entry.at("q");
        if (q.size() != 4) throw std::runtime_error("tabular entry q must have 4 values");
        const AgentObservation obs{o.at(0).get<int>(), o.at(1).get<int>(), o.at(2).get<int>()};
        for (int a = 0; a < kNumActions; ++a) {
            table->at(obs, static_cast<Action>(a)) = q.at(a).get<double>();
        }
    }
    return table;
}

std::unique_ptr<QFunction> mlp_from_json(const json& j) {
    const int side = j.at("side_length").get<int>();
    const auto& jlayers = j.at("layers");
    if (jlayers.empty()) throw std::runtime_error("mlp needs at least one layer");
    std::vector<int> hidden;
    for (std::size_t l = 0; l + 1 < jlayers.size(); ++l) {
        hidden.push_back(jlayers.at(l).at("rows").get<int>());
    }
    auto net = std::make_unique<MlpQNetwork>(MlpQNetwork::zeros(hidden, side));
    for (std::size_t l = 0; l < jlayers.size(); ++l) {
        const auto& jl = jlayers.at(l);
        auto& layer = net->layers()[l];
        const auto rows = jl.at("rows").get<Eigen::Index>();
        const auto cols = jl.at("cols").get<Eigen::Index>();
        if (rows != layer.weights.rows() || cols != layer.weights.cols()) {
            throw std::runtime_error("mlp layer shape mismatch");
        }
        const auto& w = jl.at("w");
        if (static_cast<Eigen::Index>(w.size()) != rows * cols) {
            throw std::runtime_error("mlp layer weight count mismatch");
        }
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                layer.weights(r, c) = w.at(static_cast<std::size_t>(r * cols + c)).get<double>();
            }
        }
        const auto& b = jl.at("b");
        if (static_cast<Eigen::Index>(b.size()) != rows) {
            throw std::runtime_error("mlp layer bias count mismatch");
        }
        for (Eigen::Index r = 0; r < rows; ++r) {
            layer.bias(r) = b.at(static_cast<std::size_t>(r)).get<double>();
        }
    }
    net->reset_training_state();
    return net;
}

}  // namespace

void save_qfunction(const QFunction& qf, const std::filesystem::path& path) {
    json j;
    if (qf.kind() == "tabular") {
        j = to_json(dynamic_cast<const QTable&>(qf));
    } else if (qf.kind() == "mlp") {
        j = to_json(dynamic_cast<const MlpQNetwork&>(qf));
    } else {
        throw std::runtime_error("save_qfunction: unknown kind " + qf.kind());
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_qfunction: cannot open " + path.string() +
                                 " for writing");
    }
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("save_qfunction: write failed for " + path.string());
}

std::unique_ptr<QFunction> load_qfunction(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_qfunction: cannot open " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error("load_qfunction: malformed JSON in " + path.string() + ": " +
                                 e.what());
    }
    try {
        if (j.at("version").get<int>() != 1) {
            throw std::runtime_error("unsupported version " +
                                     std::to_string(j.at("version").get<int>()));
        }
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "tabular") return tabular_from_json(j);
        if (kind == "mlp") return mlp_from_json(j);
        throw std::runtime_error("unknown kind \"" + kind + "\"");
    } catch (const json::exception& e) {
        throw std::runtime_error("load_qfunction: invalid schema in " + path.string() + ": " +
                                 e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error("load_qfunction: " + path.string() + ": " + e.what());
    }
}

}  // namespace rlintro
