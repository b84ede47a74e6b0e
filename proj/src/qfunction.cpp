#include "rlintro/qfunction.hpp"

#include <algorithm>

namespace rlintro {

std::vector<std::pair<AgentObservation, QValues>> QTable::sorted_entries() const {
    std::vector<std::pair<AgentObservation, QValues>> out(entries_.begin(), entries_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

}  // namespace rlintro
