#include "special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpcn {

namespace {

constexpr double kInvE = 0.36787944117144232160;
constexpr int kMaxHalleyIter = 50;

// Series around the branch point x = -1/e in p = sqrt(2*(1 + e*x)).
double branch_series(double p) {
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * (43.0 / 540.0))));
}

double initial_guess(double x) {
  const double d = x + kInvE;
  if (d < 0.05) {
    return branch_series(std::sqrt(2.0 * M_E * d));
  }
  if (x < 0.5) {
    return x * (1.0 + x * (-1.0 + x * 1.5));
  }
  if (x < 3.0) {
    return std::log(1.0 + x);
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) {
    throw std::domain_error("lambert_w0: NaN argument");
  }
  if (x < -kInvE) {
    if (x < -kInvE - 1e-14) {
      throw std::domain_error("lambert_w0: argument below -1/e");
    }
    return -1.0;
  }
  if (x == 0.0) {
    return 0.0;
  }
  if (std::isinf(x)) {
    return x;
  }

  const double target = 1e-14 * std::max(1.0, std::fabs(x));
  double w = initial_guess(x);
  for (int it = 0; it < kMaxHalleyIter; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::fabs(f) <= target) {
      return w;
    }
    // Halley step; falls back to Newton when the curvature term degenerates.
    const double wp1 = w + 1.0;
    double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) {
      denom = ew * wp1;
    }
    const double next = w - f / denom;
    if (next == w) {
      return w;  // step below one ulp, nothing left to gain
    }
    w = next;
  }

  if (std::fabs(w * std::exp(w) - x) <= 1e-12 * std::max(1.0, std::fabs(x))) {
    return w;
  }
  throw std::runtime_error("lambert_w0: residual target not reached");
}

std::optional<double> find_root_decreasing(const std::function<double(double)>& f,
                                           double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("find_root_decreasing: tol must be positive");
  }

  RootBracket br;
  br.lo = 0.0;
  br.f_lo = f(0.0);
  if (!std::isfinite(br.f_lo)) {
    throw std::runtime_error("find_root_decreasing: f(0) is not finite");
  }
  if (br.f_lo <= 0.0) {
    return std::nullopt;
  }

  br.hi = 1.0;
  br.f_hi = f(br.hi);
  int doublings = 0;
  while (br.f_hi > 0.0) {
    if (++doublings > 200) {
      throw std::runtime_error("find_root_decreasing: no sign change after 200 doublings");
    }
    br.lo = br.hi;
    br.f_lo = br.f_hi;
    br.hi *= 2.0;
    br.f_hi = f(br.hi);
  }
  if (std::fabs(br.f_hi) <= tol) {
    return br.hi;
  }

  // Alternate secant and bisection steps: the secant candidate accelerates
  // convergence, the interleaved bisection keeps the bracket shrinking.
  for (int it = 0; it < 400; ++it) {
    const double width = br.hi - br.lo;
    double mid = 0.5 * (br.lo + br.hi);
    if (it % 2 == 0 && br.f_lo > br.f_hi) {
      const double s = br.lo + width * (br.f_lo / (br.f_lo - br.f_hi));
      const double margin = 0.01 * width;
      if (s > br.lo + margin && s < br.hi - margin) {
        mid = s;
      }
    }
    if (!(mid > br.lo && mid < br.hi)) {
      break;  // bracket exhausted at double precision
    }
    const double fm = f(mid);
    if (std::fabs(fm) <= tol) {
      return mid;
    }
    if (fm > 0.0) {
      br.lo = mid;
      br.f_lo = fm;
    } else {
      br.hi = mid;
      br.f_hi = fm;
    }
  }
  throw std::runtime_error("find_root_decreasing: residual tolerance not reached");
}

}  // namespace wpcn
