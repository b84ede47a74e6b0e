#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rlintro {

// The four cardinal movement options, index order fixed by the wire formats.
enum class Action : std::uint8_t { Left = 0, Right = 1, Forward = 2, Backward = 3 };

inline constexpr int kNumActions = 4;

inline constexpr std::array<Action, kNumActions> all_actions() {
    return {Action::Left, Action::Right, Action::Forward, Action::Backward};
}

// Unit displacement in meters: x grows Rightward, y grows Forward.
inline constexpr std::array<int, 2> displacement(Action a) {
    switch (a) {
        case Action::Left: return {-1, 0};
        case Action::Right: return {+1, 0};
        case Action::Forward: return {0, +1};
        case Action::Backward: return {0, -1};
    }
    return {0, 0};
}

inline const std::string& action_name(Action a) {
    static const std::array<std::string, kNumActions> names = {"left", "right", "forward",
                                                               "backward"};
    return names[static_cast<std::size_t>(a)];
}

inline Action action_from_name(const std::string& name) {
    for (Action a : all_actions()) {
        if (action_name(a) == name) return a;
    }
    throw std::invalid_argument("unknown action name: " + name);
}

inline Action action_from_index(int i) {
    if (i < 0 || i >= kNumActions) {
        throw std::invalid_argument("action index out of range: " + std::to_string(i));
    }
    return static_cast<Action>(i);
}

}  // namespace rlintro
