// Independent reference evaluations used as test oracles. Deliberately
// written from the model formulas, without calling into the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace oracle {

inline double desired_gap(double v, double dv, double s0, double T, double a, double b) {
  return s0 + std::max(0.0, v * T + v * dv / (2.0 * std::sqrt(a * b)));
}

// gap = +inf for a free road.
inline double idm(double v, double gap, double dv, double a, double b, double v0,
                  double T, double s0, double delta) {
  double acc = 1.0 - std::pow(v / v0, delta);
  if (std::isfinite(gap)) {
    const double s = desired_gap(v, dv, s0, T, a, b) / gap;
    acc -= s * s;
  }
  return a * acc;
}

// Gap at which a follower at speed v behind a leader at the same speed has
// zero acceleration, by bisection on the IDM formula.
inline double equilibrium_gap(double v, double a, double b, double v0, double T,
                              double s0, double delta) {
  double lo = 1e-9;
  double hi = 1e6;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (idm(v, mid, 0.0, a, b, v0, T, s0, delta) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double friis(double pt, double gt, double gr, double w, double loss, double d) {
  const double four_pi_d = 4.0 * std::numbers::pi * d;
  return pt * gt * gr * w * w / (four_pi_d * four_pi_d * loss);
}

inline double eq5(std::uint64_t nf, std::uint64_t nb, double alpha) {
  if (nf == 0 || nb == 0) return 1.0;
  const double f = double(nf);
  const double b = double(nb);
  return 1.0 - std::exp(-alpha * std::fabs(f - b) / (f + b));
}

inline double eq6(std::uint64_t nk, std::uint64_t nopp, double alpha) {
  if (nk == 0) return 1.0;
  const double k = double(nk);
  return 1.0 - std::exp(-alpha * k / (k + double(nopp)));
}

}  // namespace oracle
