#include "groundnav/compass.hpp"

#include <array>
#include <cmath>

namespace groundnav {

namespace {

constexpr std::array<std::string_view, kCompassCount> kPhrases = {
    "east", "north east", "north", "north west",
    "west", "south west", "south", "south east"};

}  // namespace

double wrap_angle(double angle) {
  double a = std::fmod(angle + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  a -= kPi;
  // fmod rounding can land exactly on +pi.
  if (a >= kPi) a -= 2.0 * kPi;
  return a;
}

int compass_index(double angle) {
  const double x = wrap_angle(angle) / (kPi / 4.0);
  const int k = static_cast<int>(std::ceil(x - 0.5));
  return ((k % kCompassCount) + kCompassCount) % kCompassCount;
}

double compass_angle(int index) {
  return wrap_angle(static_cast<double>(index) * kPi / 4.0);
}

std::string_view compass_phrase(int index) {
  return kPhrases.at(static_cast<std::size_t>(
      ((index % kCompassCount) + kCompassCount) % kCompassCount));
}

std::optional<int> compass_from_words(const std::vector<std::string>& words) {
  std::string joined;
  for (const auto& w : words) {
    if (!joined.empty()) joined.push_back(' ');
    joined += w;
  }
  for (int i = 0; i < kCompassCount; ++i) {
    if (joined == kPhrases[static_cast<std::size_t>(i)]) return i;
  }
  return std::nullopt;
}

}  // namespace groundnav
