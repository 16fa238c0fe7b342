#include "pragnav/world/geometry.hpp"

#include <cmath>

namespace pragnav::world {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double direction(Vec2 from, Vec2 to) {
  return std::atan2(to.y - from.y, to.x - from.x);
}

double wrap_angle(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(radians, two_pi);
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  if (wrapped > std::numbers::pi) wrapped -= two_pi;
  return wrapped;
}

int heading_bin(double radians) {
  const auto bin = static_cast<int>(std::lround(wrap_angle(radians) / kHeadingStep));
  return ((bin % kHeadingBins) + kHeadingBins) % kHeadingBins;
}

double bin_angle(int bin) { return wrap_angle(bin * kHeadingStep); }

bool in_frontal_cone(double radians, int bin) {
  // Small slack so a landmark placed exactly on a cone edge counts as visible
  // regardless of floating point rounding in wrap_angle.
  return std::abs(wrap_angle(radians - bin_angle(bin))) <= std::numbers::pi / 4 + 1e-12;
}

}  // namespace pragnav::world
