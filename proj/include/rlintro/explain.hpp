#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlintro/introspection.hpp"

namespace rlintro {

struct Explanation {
    std::string text;
    Action chosen_action = Action::Left;
    double chosen_probability = 0.0;
    std::optional<Action> contrast_action;
    std::optional<double> contrast_probability;
};

// Probability rounded half-up to an integer percent.
int percent(double probability);

// Actions sorted by success probability, descending; ties keep action-index
// order.
std::vector<std::pair<Action, double>> rank_actions(const SuccessProbability& probs);

// "I moved X because it has a success probability of P %." wording.
Explanation standalone_explanation(Action chosen, const SuccessProbability& probs);

// "I moved X because it has a success probability of P %, whereas moving Y
// only has a success probability of Q %." wording. Chosen and contrast must
// differ.
Explanation contrastive_explanation(Action chosen, Action contrast,
                                    const SuccessProbability& probs);

}  // namespace rlintro
