#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpcn {

namespace {

constexpr double kEdge = 1e-7;  // keeps fractions away from exact 0/1
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct EpochProblem {
  int n = 0;
  double lambda = 0.0;
  double peak_power = 0.0;
  std::vector<double> a;
  std::vector<double> c;
  std::vector<double> w;  // 1 / rbar_k
};

EpochProblem make_problem(const ChannelState& channel, const NetworkConfig& config,
                          double lambda, std::span<const double> rbar) {
  EpochProblem p;
  p.n = config.num_users;
  p.lambda = lambda;
  p.peak_power = config.peak_power;
  p.a.assign(channel.a.begin(), channel.a.end());
  p.c.resize(p.n);
  p.w.resize(p.n);
  for (int k = 0; k < p.n; ++k) {
    p.c[k] = config.circuit_power * channel.x[k];
    p.w[k] = 1.0 / rbar[k];
  }
  return p;
}

// Epoch dual value at (tau, e); -inf for inadmissible points under the
// exclude rule. tau0 enters only through the uplink budget and the e range.
double objective(const EpochProblem& p, std::span<const double> tau, double e,
                 OffRegimeRule rule) {
  double value = -p.lambda * e;
  for (int k = 0; k < p.n; ++k) {
    if (tau[k] <= 0.0) {
      return kNegInf;
    }
    const double arg = 1.0 - p.c[k] + p.a[k] * e / tau[k];
    if (arg <= 1.0) {
      if (rule == OffRegimeRule::exclude) {
        return kNegInf;
      }
      continue;  // zero-rate user
    }
    value += p.w[k] * tau[k] * std::log(arg);
  }
  return value;
}

struct Window {
  double lo = 0.0;
  double hi = 1.0;

  double at(int i, int n) const { return lo + (hi - lo) * i / (n - 1); }
  double cell(int n) const { return (hi - lo) / (n - 1); }
  Window zoom(double center, int n, double global_lo, double global_hi) const {
    const double half = 2.0 * cell(n);
    return Window{std::max(global_lo, center - half), std::min(global_hi, center + half)};
  }
};

struct Candidate {
  double objective = kNegInf;
  double tau0 = 0.0;
  double f1 = 0.0;  // uplink share coordinates (unused axes stay 0)
  double f2 = 0.0;
  double phi = 0.0;  // e / (P_max * tau0)
};

// Shares (f1, f2) -> per-user tau scaled by the uplink budget 1 - tau0.
// K = 1 uses none of the coordinates, K = 2 uses f1, K = 3 uses both.
bool shares_to_tau(int n, double f1, double f2, double budget,
                   std::vector<double>& tau) {
  switch (n) {
    case 1:
      tau[0] = budget;
      return true;
    case 2:
      if (f1 <= 0.0 || f1 >= 1.0) {
        return false;
      }
      tau[0] = f1 * budget;
      tau[1] = (1.0 - f1) * budget;
      return true;
    case 3: {
      const double f3 = 1.0 - f1 - f2;
      if (f1 <= 0.0 || f2 <= 0.0 || f3 <= 0.0) {
        return false;
      }
      tau[0] = f1 * budget;
      tau[1] = f2 * budget;
      tau[2] = f3 * budget;
      return true;
    }
    default:
      return false;
  }
}

Candidate sweep(const EpochProblem& p, const GridSpec& grid, OffRegimeRule rule,
                const Window& wt0, const Window& wf1, const Window& wf2,
                const Window& wphi) {
  Candidate best;
  std::vector<double> tau(p.n);
  const int nf1 = p.n >= 2 ? grid.n_simplex : 1;
  const int nf2 = p.n >= 3 ? grid.n_simplex : 1;
  for (int it = 0; it < grid.n_tau0; ++it) {
    const double tau0 = wt0.at(it, grid.n_tau0);
    if (tau0 <= 0.0 || tau0 >= 1.0) {
      continue;
    }
    const double budget = 1.0 - tau0;
    for (int i1 = 0; i1 < nf1; ++i1) {
      const double f1 = p.n >= 2 ? wf1.at(i1, grid.n_simplex) : 0.0;
      for (int i2 = 0; i2 < nf2; ++i2) {
        const double f2 = p.n >= 3 ? wf2.at(i2, grid.n_simplex) : 0.0;
        if (!shares_to_tau(p.n, f1, f2, budget, tau)) {
          continue;
        }
        for (int ie = 0; ie < grid.n_e; ++ie) {
          const double phi = wphi.at(ie, grid.n_e);
          const double value = objective(p, tau, phi * p.peak_power * tau0, rule);
          if (value > best.objective) {
            best = Candidate{value, tau0, f1, f2, phi};
          }
        }
      }
    }
  }
  return best;
}

}  // namespace

GridSearchOutcome grid_search_epoch(const ChannelState& channel,
                                    const NetworkConfig& config, double lambda,
                                    std::span<const double> rbar,
                                    const GridSpec& grid, OffRegimeRule rule) {
  if (config.num_users < 1 || config.num_users > 3) {
    throw std::invalid_argument("grid_search_epoch: K must be 1, 2, or 3");
  }
  if (grid.n_tau0 < 50 || grid.n_simplex < 50 || grid.n_e < 50) {
    throw std::invalid_argument("grid_search_epoch: grid counts must be >= 50");
  }

  const EpochProblem p = make_problem(channel, config, lambda, rbar);

  Window wt0{kEdge, 1.0 - kEdge};
  Window wf1{kEdge, 1.0 - kEdge};
  Window wf2{kEdge, 1.0 - kEdge};
  Window wphi{0.0, 1.0};

  Candidate best = sweep(p, grid, rule, wt0, wf1, wf2, wphi);
  for (int round = 0; round < 2 && best.objective > kNegInf; ++round) {
    wt0 = wt0.zoom(best.tau0, grid.n_tau0, kEdge, 1.0 - kEdge);
    wf1 = wf1.zoom(best.f1, grid.n_simplex, kEdge, 1.0 - kEdge);
    wf2 = wf2.zoom(best.f2, grid.n_simplex, kEdge, 1.0 - kEdge);
    wphi = wphi.zoom(best.phi, grid.n_e, 0.0, 1.0);
    const Candidate refined = sweep(p, grid, rule, wt0, wf1, wf2, wphi);
    if (refined.objective > best.objective) {
      best = refined;
    }
  }

  GridSearchOutcome out;
  out.tau.assign(config.num_users, 0.0);
  if (best.objective == kNegInf) {
    return out;
  }
  out.feasible = true;
  out.objective = best.objective;
  out.tau0 = best.tau0;
  shares_to_tau(p.n, best.f1, best.f2, 1.0 - best.tau0, out.tau);
  out.e_fraction = best.phi;
  out.e = best.phi * config.peak_power * best.tau0;
  // Boundary distances are judged against the requested grid; the zoom
  // rounds only sharpen the objective value.
  out.e_fraction_cell = 1.0 / (grid.n_e - 1);
  return out;
}

ConcavityReport verify_concavity_samples(const ChannelState& channel,
                                         const NetworkConfig& config, double lambda,
                                         std::span<const double> rbar, int pairs,
                                         std::uint64_t seed) {
  const EpochProblem p = make_problem(channel, config, lambda, rbar);
  SplitMix64 rng(seed);

  // Draw the time split uniformly, then draw the spend inside the interval
  // where every transmit power stays positive; reject only splits whose
  // interval is empty.
  std::vector<double> parts(p.n + 1);
  const auto sample_feasible = [&](double* tau0, std::vector<double>& tau,
                                   double* e) -> bool {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      double total = 0.0;
      for (auto& part : parts) {
        part = -std::log(rng.next_double());
        total += part;
      }
      *tau0 = parts[0] / total;
      double e_min = 0.0;
      bool degenerate = false;
      for (int k = 0; k < p.n; ++k) {
        tau[k] = parts[k + 1] / total;
        if (p.a[k] <= 0.0) {
          degenerate = true;  // that user can never reach the transmit regime
          break;
        }
        e_min = std::max(e_min, p.c[k] * tau[k] / p.a[k]);
      }
      if (degenerate) {
        return false;
      }
      const double e_max = p.peak_power * *tau0;
      if (e_min >= e_max) {
        continue;
      }
      // Strictly interior draw so rounding cannot land on the boundary.
      const double u = 1e-6 + (1.0 - 1e-6) * rng.next_double();
      *e = e_min + u * (e_max - e_min);
      return true;
    }
    return false;
  };

  ConcavityReport report;
  std::vector<double> tau_u(p.n), tau_v(p.n), tau_m(p.n);
  for (int i = 0; i < pairs; ++i) {
    double t0_u = 0.0, t0_v = 0.0, e_u = 0.0, e_v = 0.0;
    if (!sample_feasible(&t0_u, tau_u, &e_u) || !sample_feasible(&t0_v, tau_v, &e_v)) {
      break;  // feasible region too thin to keep sampling
    }
    for (int k = 0; k < p.n; ++k) {
      tau_m[k] = 0.5 * (tau_u[k] + tau_v[k]);
    }
    const double fu = objective(p, tau_u, e_u, OffRegimeRule::exclude);
    const double fv = objective(p, tau_v, e_v, OffRegimeRule::exclude);
    const double fm =
        objective(p, tau_m, 0.5 * (e_u + e_v), OffRegimeRule::exclude);
    const double gap = fm - 0.5 * (fu + fv);
    ++report.pairs;
    if (gap < -1e-12) {
      ++report.violations;
    }
    report.worst_gap = std::min(report.worst_gap, gap);
  }
  return report;
}

}  // namespace wpcn
