#pragma once

#include <filesystem>
#include <memory>

#include "rlintro/mlp.hpp"
#include "rlintro/qfunction.hpp"

namespace rlintro {

// JSON schemas (version 1):
//   tabular: {"kind":"tabular","version":1,"default":d,
//             "entries":[{"obs":[x,y,dist_bin],"q":[q0,q1,q2,q3]}, ...]}
//   mlp:     {"kind":"mlp","version":1,"side_length":n,
//             "layers":[{"rows":r,"cols":c,"w":[row-major],"b":[...]}, ...]}
// Doubles round-trip bit-exactly; tabular entries are sorted by observation.
void save_qfunction(const QFunction& qf, const std::filesystem::path& path);

// Throws std::runtime_error with the offending path and cause on malformed,
// truncated, or version-mismatched files.
std::unique_ptr<QFunction> load_qfunction(const std::filesystem::path& path);

}  // namespace rlintro
