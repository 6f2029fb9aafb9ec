#pragma once

// Helpers shared by several translation units; not installed.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "tsep/separability.hpp"

namespace tsep::detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kMergeAngle = 1e-6;

/// Wraps an angle into [0, 2π).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

/// Golden-section minimisation of f on [a, b] down to width `width`.
double golden_minimize(const std::function<double(double)>& f, double a, double b, double width = 1e-12);

/// max(1, ‖T‖_F): the scale decomposition tolerances are measured against.
inline double decomposition_scale(const BlockToeplitz& t) { return std::max(1.0, t.frobenius_norm()); }

/// n atoms e^{i(φ + 2πk/n)} with weight·I blocks; sums to weight·n·(order unit).
std::vector<Atom> identity_atoms(int n, int p, double weight, double phase);

/// Phase φ for identity_atoms keeping the rotated roots of unity as far as
/// possible from the given atoms.
double clear_phase(int n, const std::vector<Atom>& avoid);

}  // namespace tsep::detail
