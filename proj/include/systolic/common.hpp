#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace systolic {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Loewner's ceiling for flat tori, 2/sqrt(3).
inline constexpr double kLoewnerBound = 2.0 / std::numbers::sqrt3;
/// Bavard's ceiling for Klein bottles, pi/(2 sqrt 2).
inline constexpr double kBavardBound = std::numbers::pi / (2.0 * std::numbers::sqrt2);

/// Raised when an input violates a type invariant or an operation's
/// precondition (degenerate lattice, non-positive density, ...).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace systolic
