#include "rlintro/explain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rlintro {

int percent(double probability) {
    return static_cast<int>(std::llround(probability * 100.0));
}

std::vector<std::pair<Action, double>> rank_actions(const SuccessProbability& probs) {
    std::vector<std::pair<Action, double>> ranked;
    ranked.reserve(kNumActions);
    for (Action a : all_actions()) ranked.emplace_back(a, probs[a]);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& lhs, const auto& rhs) { return lhs.second > rhs.second; });
    return ranked;
}

Explanation standalone_explanation(Action chosen, const SuccessProbability& probs) {
    Explanation e;
    e.chosen_action = chosen;
    e.chosen_probability = probs[chosen];
    e.text = "I moved " + action_name(chosen) + " because it has a success probability of " +
             std::to_string(percent(probs[chosen])) + " %.";
    return e;
}

Explanation contrastive_explanation(Action chosen, Action contrast,
                                    const SuccessProbability& probs) {
    if (chosen == contrast) {
        throw std::invalid_argument(
            "contrastive_explanation: chosen and contrast actions must differ");
    }
    Explanation e;
    e.chosen_action = chosen;
    e.chosen_probability = probs[chosen];
    e.contrast_action = contrast;
    e.contrast_probability = probs[contrast];
    e.text = "I moved " + action_name(chosen) + " because it has a success probability of " +
             std::to_string(percent(probs[chosen])) + " %, whereas moving " +
             action_name(contrast) + " only has a success probability of " +
             std::to_string(percent(probs[contrast])) + " %.";
    return e;
}

}  // namespace rlintro
