#pragma once

#include <filesystem>

#include "rlintro/experiment.hpp"

namespace rlintro {

// Parses the experiment config file. Every key is optional and falls back to
// the defaults in the structs; unknown keys are rejected with the offending
// path in the message.
ExperimentConfig parse_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config_text(const std::string& text,
                                              const std::string& origin = "<inline>");

}  // namespace rlintro
