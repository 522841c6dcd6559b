#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace groundnav {

inline constexpr double kPi = std::numbers::pi;

/// Maps any angle into [-pi, pi).
double wrap_angle(double angle);

/// Eight compass directions at pi/4 spacing, counterclockwise from east:
/// 0 east, 1 north east, 2 north, 3 north west, 4 west, 5 south west,
/// 6 south, 7 south east. Angles use 0 = +x, pi/2 = +y.
inline constexpr int kCompassCount = 8;

/// Nearest compass direction; an angle exactly between two directions goes
/// to the one with the smaller angle.
int compass_index(double angle);

/// Wrapped angle of a compass direction (west is -pi).
double compass_angle(int index);

/// "north", "south west", ...
std::string_view compass_phrase(int index);

/// Parses a compass phrase from words, e.g. {"south", "west"}. Also accepts
/// the hyphen-split form of "north-east". Returns nullopt for anything else.
std::optional<int> compass_from_words(const std::vector<std::string>& words);

}  // namespace groundnav
