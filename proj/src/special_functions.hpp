#pragma once

#include <functional>
#include <optional>

namespace wpcn {

/// Principal branch of the Lambert W function: the w >= -1 with w*exp(w) = x.
/// Defined for x >= -1/e; inputs below the branch point by more than 1e-14
/// throw std::domain_error, inputs within that tolerance clamp to -1.
/// Residual |w*exp(w) - x| <= 1e-12 * max(1, |x|).
double lambert_w0(double x);

/// Sign-change interval for a scalar root: f(lo) and f(hi) have opposite
/// signs (or one is zero), lo < hi.
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;

  bool valid() const { return lo < hi && !(f_lo * f_hi > 0.0); }
};

/// Root of a continuous, strictly decreasing f on [0, inf).
///
/// Returns nullopt when f(0) <= 0 (no positive root exists). Otherwise
/// expands the bracket [0, 1] geometrically until the sign flips, then
/// narrows it with bisection steps interleaved with secant interpolation
/// until |f(root)| <= tol.
///
/// Throws std::runtime_error when no sign change appears after 200 doublings
/// or the residual tolerance cannot be met (malformed f).
std::optional<double> find_root_decreasing(const std::function<double(double)>& f,
                                           double tol = 1e-10);

}  // namespace wpcn
