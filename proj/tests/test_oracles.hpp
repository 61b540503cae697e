// Independent reference solvers used to freeze expected values. Plain
// bisection only, no shared code with the implementations under test.
#pragma once

#include <cmath>
#include <stdexcept>

namespace test_oracles {

// w in [-1, inf) with w*e^w = x, by bisection on the increasing branch.
inline double lambert_w0_bisect(double x) {
  const auto f = [x](double w) { return w * std::exp(w) - x; };
  double lo = -1.0;
  double hi = 1.0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e4) {
      throw std::runtime_error("lambert_w0_bisect: no upper bracket");
    }
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// z > c with ln(1-c+z) - z/(1-c+z) = b, via u = 1-c+z and
// phi(u) = ln(u) + (1-c)/u, increasing on u >= max(1-c, 0).
inline double solve_z_bisect(double c, double b) {
  const auto phi = [c](double u) { return std::log(u) + (1.0 - c) / u; };
  const double target = 1.0 + b;
  double lo = c < 1.0 ? 1.0 - c : 1e-300;
  double hi = 2.0;
  while (phi(hi) < target) {
    hi *= 2.0;
    if (hi > 1e300) {
      throw std::runtime_error("solve_z_bisect: no upper bracket");
    }
  }
  if (lo >= hi) {
    throw std::runtime_error("solve_z_bisect: empty bracket");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi) - (1.0 - c);
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

}  // namespace test_oracles
