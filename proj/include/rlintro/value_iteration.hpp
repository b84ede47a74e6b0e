#pragma once

#include "rlintro/env.hpp"
#include "rlintro/qfunction.hpp"

namespace rlintro {

// Exact optimal action-values for the reduced deterministic MDP: episodic
// rewards, fixed mailbox, no time limit (the position alone is then a
// complete state). Jacobi sweeps until the max change drops below tol.
// Keys are the observations the agent would see, so the result compares
// directly against a learned QTable. Requires config.fixed_mailbox set and
// config.time_limit unset.
QTable value_iteration(const EnvConfig& config, double gamma, double tol = 1e-9,
                       long max_sweeps = 1000000);

}  // namespace rlintro
