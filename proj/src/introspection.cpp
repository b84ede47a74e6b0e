#include "rlintro/introspection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rlintro {

void validate(const IntrospectionConfig& config) {
    if (!(config.r_max > 0.0)) {
        throw std::invalid_argument("introspection: r_max must be positive");
    }
    if (!(config.b > 0.0 && config.b < config.r_max)) {
        throw std::invalid_argument("introspection: b must be in (0, r_max)");
    }
    if (!(config.sigma >= 0.0 && config.sigma < 1.0)) {
        throw std::invalid_argument("introspection: sigma must be in [0, 1)");
    }
    if (!(config.gamma > 0.0 && config.gamma < 1.0)) {
        throw std::invalid_argument("introspection: gamma must be in (0, 1)");
    }
}

double estimate_distance(double q, double r_terminal, double gamma) {
    if (!(q > 0.0)) {
        throw std::domain_error("estimate_distance: q must be positive, got " +
                                std::to_string(q));
    }
    if (!(r_terminal > 0.0)) {
        throw std::domain_error("estimate_distance: r_terminal must be positive");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::domain_error("estimate_distance: gamma must be in (0, 1)");
    }
    return std::log(q / r_terminal) / std::log(gamma);
}

double success_probability(double q, const IntrospectionConfig& config) {
    if (!(q > 0.0)) {
        throw std::domain_error(
            "success_probability: q must be positive (got " + std::to_string(q) +
            "); apply normalize_q_state to the state's Q-values first");
    }
    const double p = (1.0 - config.sigma) * (0.5 * std::log10(q / config.r_max) + 1.0);
    return std::clamp(p, 0.0, 1.0);
}

std::vector<double> normalize_q_state(std::span<const double> q_values,
                                      const NormalizationStats& stats,
                                      const IntrospectionConfig& config) {
    if (stats.empty) {
        throw std::invalid_argument("normalize_q_state: stats window is empty");
    }
    if (stats.q_min > stats.q_max) {
        throw std::invalid_argument("normalize_q_state: q_min exceeds q_max");
    }
    std::vector<double> out;
    out.reserve(q_values.size());
    const double span = stats.q_max - stats.q_min;
    for (double q : q_values) {
        if (q < stats.q_min || q > stats.q_max) {
            throw std::invalid_argument(
                "normalize_q_state: value " + std::to_string(q) +
                " outside the stats window [" + std::to_string(stats.q_min) + ", " +
                std::to_string(stats.q_max) + "]");
        }
        if (span == 0.0) {
            out.push_back(config.r_max);
        } else if (config.verbatim_normalization) {
            out.push_back((q - stats.q_min) * (config.r_max - config.b) / span);
        } else {
            // Clamp pins the endpoints onto the closed interval; the affine
            // map alone can overshoot r_max by one ulp.
            const double v = config.b + (q - stats.q_min) * (config.r_max - config.b) / span;
            out.push_back(std::clamp(v, config.b, config.r_max));
        }
    }
    return out;
}

SuccessProbability state_probabilities(const QFunction& qf, const AgentObservation& obs,
                                       const NormalizationStats& stats,
                                       const IntrospectionConfig& config) {
    const QValues raw = qf.q_values(obs);
    const std::vector<double> normalized = normalize_q_state(raw, stats, config);
    SuccessProbability result;
    for (int i = 0; i < kNumActions; ++i) {
        result.per_action[static_cast<std::size_t>(i)] =
            success_probability(normalized[static_cast<std::size_t>(i)], config);
    }
    return result;
}

}  // namespace rlintro
