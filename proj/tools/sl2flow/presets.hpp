#pragma once

#include <cmath>
#include <string>

#include "sl2flow/asymptotics.hpp"
#include "sl2flow/charts.hpp"
#include "sl2flow/mat2.hpp"
#include "sl2flow/state.hpp"
#include "wire.hpp"

namespace sl2flow::cli {

struct Preset {
  const char* name;
  const char* description;
  double kappa;
  PhaseState (*make)();
};

inline const Preset kPresets[] = {
    {"rigid-rotation", "rotating disk, A(t) = U(2t)", 1.0,
     [] { return PhaseState{kId, kRot * 2.0}; }},
    {"pressureless-oscillator",
     "vanishing-pressure solution, period 2 pi at kappa = 1", 1.0,
     [] {
       return PhaseState{kId, kRot * std::sqrt(2.0) + kDiag};
     }},
    {"shear-geodesic", "straight line A(t) = I + t(Rot + Off), kappa = 0",
     0.0,
     [] { return PhaseState{kId, kRot + kOff}; }},
    {"homoclinic", "orbit asymptotic to the rotating disk, X3 = 4", 1.0,
     [] { return build_homoclinic_data(1.0, 4.0, 1.0, -1); }},
    {"rigid-ellipse", "rigidly rotating ellipse, both frequencies 1", 1.0,
     [] {
       return reduced_to_ambient({{1, 0, 0}, {0, 1, 3}, Regime::X2NonZero});
     }},
    {"periodic-crossing",
     "radius oscillation passing through the rotating disks", 1.0,
     [] {
       return reduced_to_ambient({{1, 0, 0}, {1, 0, 2}, Regime::X2Zero});
     }},
    {"euler-unbounded", "generic perfect-fluid growth, kappa = 0", 0.0,
     [] {
       return PhaseState{kId, kDiag + kRot * 0.35};
     }},
    {"stable-manifold",
     "semi-bounded perfect-fluid orbit converging to a rotating disk", 0.0,
     [] { return build_rotation_manifold_data(0.0, 2.0, 1.0, -1); }},
};

inline const Preset& find_preset(const std::string& name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p;
  }
  std::string known;
  for (const auto& p : kPresets) {
    known += std::string(" ") + p.name;
  }
  throw ParseError("unknown preset '" + name + "'; known:" + known);
}

}  // namespace sl2flow::cli
