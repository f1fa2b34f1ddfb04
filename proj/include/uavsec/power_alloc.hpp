#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "uavsec/secrecy.hpp"
#include "uavsec/specfun.hpp"

// The two power subproblems, each separable across slots with a single
// average-power coupling constraint:
//   * Alice's transmit power: per-slot stationarity with a shared multiplier
//     (KKT form) solved by bisection on the rate derivative.
//   * The UAV jamming power: tangent-bound surrogate of Eve's term, then the
//     same dual-bisection scheme.
// Per-slot solves bracket the derivative when it changes sign; otherwise the
// boundary that maximizes the slot objective wins. Flat objectives tie-break
// to the smallest power.

namespace uavsec {

/// Source-power subproblem data: fixed per-slot gains plus the power box.
struct PaSubproblem {
  std::vector<double> h_b;
  double y_e = 0.0;
  double p_a_max_w = 0.0;
  double p_a_avg_w = 0.0;
};

/// Tangent-bound data for the jamming-power subproblem, one entry per slot.
/// g_k is Eve's rate at the expansion point; t_k is the (nonnegative) bound
/// slope, so the bound g_k + t_k (p - p_k) dominates Eve's decreasing rate
/// for every p at or above the expansion point.
struct PuSurrogate {
  std::vector<double> expansion_point;
  std::vector<double> g_k;
  std::vector<double> t_k;
};

/// Per-slot quantities the jamming subproblem needs with everything else
/// held fixed.
struct PuSlotContext {
  double p_a_w = 0.0;
  double d_ab_m = 0.0;
  double d_qb_m = 0.0;
  double beta0 = 0.0;
  double pathloss_exp = 0.0;
  double y_e = 0.0;
};

/// Derivative in p of the per-slot secrecy rate (natural-log scale):
///   h_b/(1 + h_b p) - (1/(y_e p^2)) e^c [Gamma(-1,c) - Gamma(-1,c + h_b/y_e)]
/// with c = 1/(y_e p), evaluated through scaled kernels.
inline double pa_slot_derivative(double p, double h_b_n, double y_e) {
  if (!(p > 0.0)) throw std::invalid_argument("pa_slot_derivative: p must be > 0");
  if (!(y_e > 0.0)) throw std::invalid_argument("pa_slot_derivative: y_e must be > 0");
  if (h_b_n < 0.0) throw std::invalid_argument("pa_slot_derivative: h_b must be >= 0");
  if (h_b_n == 0.0) return 0.0;
  const double c = 1.0 / (y_e * p);
  const double t = h_b_n / y_e;
  const double sg1 = specfun::upper_gamma_m1_scaled(c);
  const double sg2 = (t > 745.0) ? 0.0 : std::exp(-t) * specfun::upper_gamma_m1_scaled(c + t);
  return h_b_n / (1.0 + h_b_n * p) - (sg1 - sg2) / (y_e * p * p);
}

namespace detail {

/// Maximizes value(p) - lambda*p over [0, p_max] for a scalar slot problem.
/// Brackets the derivative when it changes sign across the box; boundary
/// candidates are always compared, which also covers non-bracketing
/// (monotone-derivative) slots exactly. Ties pick the smallest power.
inline double maximize_slot(const std::function<double(double)>& value,
                            const std::function<double(double)>& derivative, double p_max,
                            double lambda) {
  if (p_max <= 0.0) return 0.0;
  const double p_lo = 1e-14 * p_max;
  double stationary = -1.0;
  const double g_lo = derivative(p_lo) - lambda;
  const double g_hi = derivative(p_max) - lambda;
  if (g_lo > 0.0 && g_hi < 0.0) {
    double lo = p_lo, hi = p_max;
    for (int it = 0; it < 200 && (hi - lo) > 1e-10; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((derivative(mid) - lambda) > 0.0 ? lo : hi) = mid;
    }
    stationary = 0.5 * (lo + hi);
  }
  double best_p = 0.0;
  double best_v = value(0.0);
  auto consider = [&](double p) {
    const double v = value(p) - lambda * p;
    if (v > best_v + 1e-15 * std::max(1.0, std::abs(best_v))) {
      best_v = v;
      best_p = p;
    }
  };
  if (stationary >= 0.0) consider(stationary);
  consider(p_max);
  return best_p;
}

struct DualSolution {
  std::vector<double> p;
  double lambda = 0.0;
};

/// Dual bisection on the single average-power constraint: the per-slot
/// maximizers are nonincreasing in lambda, so the mean is too.
inline DualSolution dual_bisection(
    const std::function<double(std::size_t, double)>& slot_value,
    const std::function<double(std::size_t, double)>& slot_derivative, std::size_t n_slots,
    double p_max, double p_avg) {
  auto solve_all = [&](double lambda) {
    std::vector<double> p(n_slots);
    for (std::size_t n = 0; n < n_slots; ++n) {
      p[n] = maximize_slot([&](double x) { return slot_value(n, x); },
                           [&](double x) { return slot_derivative(n, x); }, p_max, lambda);
    }
    return p;
  };
  auto mean = [](const std::vector<double>& p) {
    return p.empty() ? 0.0 : std::accumulate(p.begin(), p.end(), 0.0) / p.size();
  };

  DualSolution sol;
  sol.p = solve_all(0.0);
  if (mean(sol.p) <= p_avg) return sol;  // average constraint slack, lambda = 0

  double lam_hi = 1.0;
  std::vector<double> p_hi = solve_all(lam_hi);
  while (mean(p_hi) > p_avg && lam_hi < 1e12) {
    lam_hi *= 2.0;
    p_hi = solve_all(lam_hi);
  }
  double lam_lo = 0.0;
  for (int it = 0; it < 200 && (lam_hi - lam_lo) > 1e-14 * std::max(1.0, lam_hi); ++it) {
    const double mid = 0.5 * (lam_lo + lam_hi);
    std::vector<double> p_mid = solve_all(mid);
    if (mean(p_mid) > p_avg) {
      lam_lo = mid;
    } else {
      lam_hi = mid;
      p_hi = std::move(p_mid);
    }
  }
  sol.p = std::move(p_hi);
  sol.lambda = lam_hi;
  return sol;
}

}  // namespace detail

struct PaSolution {
  std::vector<double> p_a_w;
  double lambda = 0.0;  // multiplier on the average constraint
};

/// Per-slot source powers maximizing the summed secrecy rate under peak and
/// average constraints. Exact for this structure: each slot's rate is
/// strictly concave in its power, so stationarity plus the shared multiplier
/// is optimal.
inline PaSolution solve_pa_detailed(const PaSubproblem& sub) {
  if (!(sub.p_a_avg_w > 0.0) || sub.p_a_avg_w > sub.p_a_max_w)
    throw std::invalid_argument("solve_pa: need 0 < p_a_avg <= p_a_max");
  if (!(sub.y_e > 0.0)) throw std::invalid_argument("solve_pa: y_e must be > 0");
  for (double h : sub.h_b)
    if (h < 0.0) throw std::invalid_argument("solve_pa: gains must be >= 0");

  auto value = [&](std::size_t n, double p) {
    if (p == 0.0 || sub.h_b[n] == 0.0) return 0.0;
    return std::log1p(sub.h_b[n] * p) - eve_rate_nats(sub.h_b[n], p, sub.y_e);
  };
  auto derivative = [&](std::size_t n, double p) { return pa_slot_derivative(p, sub.h_b[n], sub.y_e); };

  auto sol = detail::dual_bisection(value, derivative, sub.h_b.size(), sub.p_a_max_w, sub.p_a_avg_w);
  return {std::move(sol.p), sol.lambda};
}

inline std::vector<double> solve_pa(const PaSubproblem& sub) { return solve_pa_detailed(sub).p_a_w; }

namespace detail {

struct PuSlotDerived {
  double ground_gain = 0.0;  // beta0 d_ab^-psi
  double jam_coeff = 0.0;    // beta0 / d_qb^2
};

inline PuSlotDerived derive_pu_slot(const PuSlotContext& c) {
  if (!(c.d_ab_m > 0.0) || !(c.d_qb_m > 0.0))
    throw std::invalid_argument("jamming subproblem: distances must be > 0");
  return {c.beta0 * std::pow(c.d_ab_m, -c.pathloss_exp), c.beta0 / (c.d_qb_m * c.d_qb_m)};
}

}  // namespace detail

/// Eve-term tangent-bound data at the expansion point pu_k. The slope is the
/// magnitude of Eve's rate sensitivity to jamming power; it is zero whenever
/// the slot carries no source power.
inline PuSurrogate build_pu_surrogate(const std::vector<double>& pu_k,
                                      const std::vector<PuSlotContext>& contexts) {
  if (pu_k.size() != contexts.size())
    throw std::invalid_argument("build_pu_surrogate: size mismatch");
  PuSurrogate s;
  s.expansion_point = pu_k;
  s.g_k.reserve(pu_k.size());
  s.t_k.reserve(pu_k.size());
  for (std::size_t n = 0; n < pu_k.size(); ++n) {
    const auto& c = contexts[n];
    const auto d = detail::derive_pu_slot(c);
    const double denom = d.jam_coeff * pu_k[n] + 1.0;
    const double h_b = d.ground_gain / denom;
    s.g_k.push_back(eve_rate_nats(h_b, c.p_a_w, c.y_e));
    double t = 0.0;
    if (c.p_a_w > 0.0 && d.ground_gain > 0.0) {
      const double damp = (h_b / c.y_e > 745.0) ? 0.0 : std::exp(-h_b / c.y_e);
      t = c.p_a_w * d.ground_gain * d.jam_coeff * damp /
          (denom * (c.p_a_w * d.ground_gain + denom));
    }
    s.t_k.push_back(t);
  }
  return s;
}

/// Surrogate objective of the jamming subproblem (natural-log scale):
///   sum_n log(1 + A p_a / (B p + 1)) - [g_k + t_k (p - p_k)].
inline double p3b_objective_nats(const std::vector<double>& pu, const PuSurrogate& s,
                                 const std::vector<PuSlotContext>& contexts) {
  double total = 0.0;
  for (std::size_t n = 0; n < pu.size(); ++n) {
    const auto d = detail::derive_pu_slot(contexts[n]);
    const double bob = std::log1p(d.ground_gain * contexts[n].p_a_w / (d.jam_coeff * pu[n] + 1.0));
    total += bob - (s.g_k[n] + s.t_k[n] * (pu[n] - s.expansion_point[n]));
  }
  return total;
}

/// True (un-surrogated) jamming-subproblem objective, natural-log scale.
inline double p3_true_objective_nats(const std::vector<double>& pu,
                                     const std::vector<PuSlotContext>& contexts) {
  double total = 0.0;
  for (std::size_t n = 0; n < pu.size(); ++n) {
    const auto& c = contexts[n];
    const auto d = detail::derive_pu_slot(c);
    const double h_b = d.ground_gain / (d.jam_coeff * pu[n] + 1.0);
    total += std::log1p(h_b * c.p_a_w) - eve_rate_nats(h_b, c.p_a_w, c.y_e);
  }
  return total;
}

struct PuSolution {
  std::vector<double> pu_w;
  double lambda = 0.0;
};

/// Maximizes the surrogate jamming objective under peak and average
/// constraints with the same dual-bisection scheme as the source power.
/// The surrogate objective at the output never falls below its value at the
/// expansion point (the expansion point is itself feasible).
inline PuSolution solve_pu_detailed(const PuSurrogate& s, const std::vector<PuSlotContext>& contexts,
                                    double p_u_max, double p_u_avg) {
  if (s.expansion_point.size() != contexts.size())
    throw std::invalid_argument("solve_pu: size mismatch");
  if (p_u_max < 0.0 || p_u_avg < 0.0) throw std::invalid_argument("solve_pu: negative power cap");

  auto value = [&](std::size_t n, double p) {
    const auto d = detail::derive_pu_slot(contexts[n]);
    const double bob = std::log1p(d.ground_gain * contexts[n].p_a_w / (d.jam_coeff * p + 1.0));
    return bob - s.t_k[n] * p;
  };
  auto derivative = [&](std::size_t n, double p) {
    const auto d = detail::derive_pu_slot(contexts[n]);
    const double denom = d.jam_coeff * p + 1.0;
    const double bob_slope = -contexts[n].p_a_w * d.ground_gain * d.jam_coeff /
                             (denom * (denom + contexts[n].p_a_w * d.ground_gain));
    return bob_slope - s.t_k[n];
  };

  auto sol = detail::dual_bisection(value, derivative, contexts.size(), p_u_max, p_u_avg);
  return {std::move(sol.p), sol.lambda};
}

inline std::vector<double> solve_pu(const PuSurrogate& s, const std::vector<PuSlotContext>& contexts,
                                    double p_u_max, double p_u_avg) {
  return solve_pu_detailed(s, contexts, p_u_max, p_u_avg).pu_w;
}

}  // namespace uavsec
