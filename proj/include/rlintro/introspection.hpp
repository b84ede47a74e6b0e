#pragma once

#include <span>
#include <string>
#include <vector>

#include "rlintro/qfunction.hpp"

namespace rlintro {

enum class NormalizationWindow { Cumulative, PerLog };

struct IntrospectionConfig {
    // Maximum reward: the terminal reward in the episodic task, the largest
    // single-step reward in the non-episodic one; 100 for both tasks here.
    double r_max = 100.0;
    // Stochasticity correction; 0 for deterministic transitions.
    double sigma = 0.0;
    // Additive normalization floor keeping normalized values strictly
    // positive so the log transform is defined.
    double b = 0.1;
    // Discount, used by the distance estimator only.
    double gamma = 0.99;
    // When set, normalization uses the formula without the additive floor,
    // mapping the observed minimum to exactly 0.
    bool verbatim_normalization = false;
    NormalizationWindow window = NormalizationWindow::Cumulative;
};

void validate(const IntrospectionConfig& config);

// Min/max of all observed Q-values over some observation window.
struct NormalizationStats {
    double q_min = 0.0;
    double q_max = 0.0;
    std::string window;  // free-form descriptor: which state/actions/range
    bool empty = true;

    void update(double q) {
        if (empty) {
            q_min = q_max = q;
            empty = false;
        } else {
            if (q < q_min) q_min = q;
            if (q > q_max) q_max = q;
        }
    }
    void update(std::span<const double> qs) {
        for (double q : qs) update(q);
    }
};

// Steps-to-terminal-reward estimate: log(q / r_terminal) / log(gamma),
// inverting q = r_terminal * gamma^n. Requires positive inputs.
double estimate_distance(double q, double r_terminal, double gamma);

// clamp((1 - sigma) * (0.5 * log10(q / r_max) + 1), 0, 1). Requires q > 0;
// normalize non-positive Q-values first.
double success_probability(double q, const IntrospectionConfig& config);

// Affine per-state rescaling of observed Q-values into [b, r_max]:
//   q_norm = b + (q - q_min) * (r_max - b) / (q_max - q_min)
// (without the b terms when verbatim_normalization is set). A degenerate
// window (q_max == q_min) maps everything to r_max. Values outside
// [q_min, q_max] violate the stats contract.
std::vector<double> normalize_q_state(std::span<const double> q_values,
                                      const NormalizationStats& stats,
                                      const IntrospectionConfig& config);

struct SuccessProbability {
    std::array<double, kNumActions> per_action{};

    double operator[](Action a) const { return per_action[static_cast<std::size_t>(a)]; }
};

// Normalization then the probability transform, elementwise over the four
// action-values of one observation.
SuccessProbability state_probabilities(const QFunction& qf, const AgentObservation& obs,
                                       const NormalizationStats& stats,
                                       const IntrospectionConfig& config);

}  // namespace rlintro
