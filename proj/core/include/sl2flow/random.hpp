#pragma once

#include <cstdint>

#include "sl2flow/charts.hpp"
#include "sl2flow/mat2.hpp"
#include "sl2flow/state.hpp"

namespace sl2flow {

// Deterministic random state source. The uint64 -> double mapping is fixed
// here rather than through <random> distributions so that seeded runs emit
// identical bytes on any platform.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double angle() { return uniform(0.0, 2.0 * 3.14159265358979323846); }

  Mat2 mat2(double scale) {
    return {uniform(-scale, scale), uniform(-scale, scale),
            uniform(-scale, scale), uniform(-scale, scale)};
  }

  Vec3 vec3(double scale) {
    return {uniform(-scale, scale), uniform(-scale, scale),
            uniform(-scale, scale)};
  }

  // Unit-determinant matrix drawn through the global chart.
  Mat2 sl2(double range = 2.0) { return phi(vec3(range)); }

  Mat2 so2() { return rotation(angle()); }

  // Valid dynamical state (A, B): position through the chart, velocity as the
  // push-forward of a chart velocity.
  PhaseState d_state(double x_range = 1.5, double y_range = 1.5) {
    return big_phi(vec3(x_range), vec3(y_range));
  }

 private:
  std::uint64_t state_;
};

}  // namespace sl2flow
