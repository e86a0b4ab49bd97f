#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ktraj {

// Gradient-hardware limits and the k-space velocity/acceleration bounds they
// induce. v_max and a_max are always derived from the primaries.
struct MachineConstraints {
  double gamma = 42.576e6; // gyromagnetic ratio, Hz/T (1H)
  double g_max = 0.040;    // peak gradient, T/m
  double s_max = 200.0;    // peak slew rate, T/m/s
  double dt = 1.0e-5;      // dwell time between samples, s

  MachineConstraints() = default;
  MachineConstraints(double gamma_, double g_max_, double s_max_, double dt_)
      : gamma(gamma_), g_max(g_max_), s_max(s_max_), dt(dt_) {
    validate();
  }

  void validate() const {
    if (gamma <= 0 || g_max <= 0 || s_max <= 0 || dt <= 0)
      throw std::invalid_argument("MachineConstraints: all fields must be positive");
  }

  double v_max() const { return gamma * g_max; } // m^-1 / s
  double a_max() const { return gamma * s_max; } // m^-1 / s^2
};

// Worst-case kinematics of a dense trajectory against the machine limits.
// Margins are fractions of the respective limit (1.0 = exactly at the limit).
struct FeasibilityReport {
  double max_speed = 0.0;
  double max_accel = 0.0;
  double speed_margin = 0.0;
  double accel_margin = 0.0;
  long violation_count = 0;

  bool feasible() const { return violation_count == 0; }
};

} // namespace ktraj
