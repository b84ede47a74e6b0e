#pragma once

#include <array>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "rlintro/action.hpp"
#include "rlintro/env.hpp"

namespace rlintro {

using QValues = std::array<double, kNumActions>;

// Read interface shared by the tabular table and the neural network; the
// introspection pipeline only ever sees this.
class QFunction {
  public:
    virtual ~QFunction() = default;
    virtual QValues q_values(const AgentObservation& obs) const = 0;
    virtual std::string kind() const = 0;
    virtual std::unique_ptr<QFunction> clone() const = 0;
};

class QTable : public QFunction {
  public:
    explicit QTable(double default_value = 0.0) : default_value_(default_value) {}

    // Unseen states read as default_value and are not inserted.
    QValues q_values(const AgentObservation& obs) const override {
        auto it = entries_.find(obs);
        if (it == entries_.end()) {
            return {default_value_, default_value_, default_value_, default_value_};
        }
        return it->second;
    }

    std::string kind() const override { return "tabular"; }

    std::unique_ptr<QFunction> clone() const override { return std::make_unique<QTable>(*this); }

    double& at(const AgentObservation& obs, Action a) {
        auto [it, inserted] = entries_.try_emplace(
            obs, QValues{default_value_, default_value_, default_value_, default_value_});
        return it->second[static_cast<std::size_t>(a)];
    }

    bool contains(const AgentObservation& obs) const { return entries_.count(obs) > 0; }
    std::size_t size() const { return entries_.size(); }
    double default_value() const { return default_value_; }

    // Entries sorted by observation; serialization and iteration order.
    std::vector<std::pair<AgentObservation, QValues>> sorted_entries() const;

  private:
    double default_value_;
    std::unordered_map<AgentObservation, QValues, ObservationHash> entries_;
};

}  // namespace rlintro
