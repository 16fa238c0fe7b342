#pragma once

#include <numbers>

namespace pragnav::world {

inline constexpr int kHeadingBins = 12;
inline constexpr double kHeadingStep = 2.0 * std::numbers::pi / kHeadingBins;

// Planar position in abstract length units.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(Vec2 a, Vec2 b);

// Angle of the vector a->b, counter-clockwise from +x, in (-pi, pi].
double direction(Vec2 from, Vec2 to);

// Wraps an angle into (-pi, pi].
double wrap_angle(double radians);

// Nearest of the 12 heading bins; bin 0 faces +x, bin 3 faces +y.
int heading_bin(double radians);

double bin_angle(int bin);

// True when `radians` lies inside the 90 degree frontal cone of `bin`.
bool in_frontal_cone(double radians, int bin);

}  // namespace pragnav::world
