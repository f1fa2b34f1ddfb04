#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "uavsec/oracle.hpp"
#include "uavsec/scenario.hpp"
#include "uavsec/specfun.hpp"

// The objective: Bob's jammed channel gain, Eve's fading average, and the
// per-slot / average secrecy rates in both closed form and quadrature form.
//
// The closed form and the defining integral agree exactly in natural
// logarithms; rates are therefore computed in nats internally and scaled by
// 1/ln 2 at the reporting boundary, so the averaged definition in bits and
// the reported value coincide.

namespace uavsec {

inline constexpr double kNatsToBits = 1.4426950408889634;  // 1/ln 2

/// Distances entering one slot's channel gains, meters.
struct SlotGeometry {
  double d_ab_m = 0.0;  // Alice-Bob ground distance
  double d_qb_m = 0.0;  // UAV-Bob 3-D distance
};

/// Per-slot rate decomposition plus the flight average, bits/channel-use.
struct SecrecyEvaluation {
  std::vector<double> per_slot_bob;
  std::vector<double> per_slot_eve;
  std::vector<double> per_slot_net;
  double average_rate = 0.0;
};

/// Bob's channel power gain under line-of-sight jamming:
///   h_b = beta0 d_ab^-psi / (p_u beta0 d_qb^-2 + 1).
/// Strictly decreasing in p_u, strictly increasing in d_qb.
inline double bob_gain(double pu_w, const SlotGeometry& geom, double beta0, double pathloss_exp) {
  if (!(geom.d_ab_m > 0.0) || !(geom.d_qb_m > 0.0))
    throw std::invalid_argument("bob_gain: distances must be > 0");
  if (pu_w < 0.0) throw std::invalid_argument("bob_gain: jamming power must be >= 0");
  const double ground_gain = beta0 * std::pow(geom.d_ab_m, -pathloss_exp);
  const double jam_inr = pu_w * beta0 / (geom.d_qb_m * geom.d_qb_m);
  return ground_gain / (jam_inr + 1.0);
}

/// Rayleigh squared-envelope density of Eve's channel gain:
///   f(h_e) = (1/y_e) exp(-h_e/y_e), h_e >= 0.
inline double eve_pdf(double h_e, double y_e) {
  if (!(y_e > 0.0)) throw std::invalid_argument("eve_pdf: y_e must be > 0");
  if (h_e < 0.0) throw std::invalid_argument("eve_pdf: h_e must be >= 0");
  return std::exp(-h_e / y_e) / y_e;
}

/// Eve's expected information rate for one slot, natural-log scale:
///   int_0^{h_b} p_a exp(-h/y_e)/(1 + h p_a) dh
///     = e^c [E1(c) - E1(c + h_b/y_e)],   c = 1/(y_e p_a).
/// Evaluated through scaled kernels so the e^c factor never overflows, even
/// for vanishing p_a.
inline double eve_rate_nats(double h_b, double p_a, double y_e) {
  if (!(y_e > 0.0)) throw std::invalid_argument("eve_rate_nats: y_e must be > 0");
  if (h_b < 0.0 || p_a < 0.0) throw std::invalid_argument("eve_rate_nats: negative input");
  if (h_b == 0.0 || p_a == 0.0) return 0.0;
  const double c = 1.0 / (y_e * p_a);
  const double t = h_b / y_e;
  const double s1 = specfun::expint_E1_scaled(c);
  const double s2 = (t > 745.0) ? 0.0 : std::exp(-t) * specfun::expint_E1_scaled(c + t);
  return s1 - s2;
}

namespace detail {

inline double to_bits_nonneg(double nats) {
  double bits = nats * kNatsToBits;
  if (bits < 0.0 && bits > -1e-12) bits = 0.0;  // rounding dust only
  return bits;
}

}  // namespace detail

/// Closed-form secrecy rate of one slot, bits/channel-use:
///   [log(1 + h_b p_a) - EveRate] / ln 2.
/// Zero when p_a = 0 or h_b = 0; nonnegative for all valid inputs.
inline double slot_rate_closed(double h_b, double p_a, double y_e) {
  if (!(y_e > 0.0)) throw std::invalid_argument("slot_rate_closed: y_e must be > 0");
  if (h_b < 0.0 || p_a < 0.0) throw std::invalid_argument("slot_rate_closed: negative input");
  if (h_b == 0.0 || p_a == 0.0) return 0.0;
  return detail::to_bits_nonneg(std::log1p(h_b * p_a) - eve_rate_nats(h_b, p_a, y_e));
}

/// Same slot rate with the Eve integral evaluated by adaptive quadrature
/// (absolute tolerance 1e-12). Serves as the independent oracle for
/// slot_rate_closed; fails loudly if the quadrature does not converge.
inline double slot_rate_quadrature(double h_b, double p_a, double y_e) {
  if (!(y_e > 0.0)) throw std::invalid_argument("slot_rate_quadrature: y_e must be > 0");
  if (h_b < 0.0 || p_a < 0.0) throw std::invalid_argument("slot_rate_quadrature: negative input");
  if (h_b == 0.0 || p_a == 0.0) return 0.0;
  const auto eve = oracle::quadrature_eve_term(h_b, p_a, y_e, 1e-12);
  return detail::to_bits_nonneg(std::log1p(h_b * p_a) - eve.value);
}

/// Full-flight evaluation via the closed form. Inputs must be feasible for
/// the scenario; violations propagate as errors.
inline SecrecyEvaluation evaluate(const Trajectory& traj, const PowerSchedule& powers,
                                  const ScenarioConfig& cfg) {
  auto tv = trajectory_violations(traj, cfg);
  auto pv = power_violations(powers, cfg);
  tv.insert(tv.end(), pv.begin(), pv.end());
  if (!tv.empty()) throw std::invalid_argument("evaluate: infeasible input: " + join_violations(tv));

  const double d_ab = distance(cfg.alice.position, cfg.bob.position);
  SecrecyEvaluation out;
  const std::size_t n_slots = traj.points.size();
  out.per_slot_bob.reserve(n_slots);
  out.per_slot_eve.reserve(n_slots);
  out.per_slot_net.reserve(n_slots);
  double sum = 0.0;  // left-to-right over slots for determinism
  for (std::size_t n = 0; n < n_slots; ++n) {
    const SlotGeometry geom{d_ab, distance(traj.points[n], cfg.bob.position)};
    const double h_b = bob_gain(powers.pu_w[n], geom, cfg.beta0, cfg.pathloss_exp);
    const double p_a = powers.pa_w[n];
    const double bob_bits = std::log1p(h_b * p_a) * kNatsToBits;
    const double eve_bits = (p_a > 0.0) ? eve_rate_nats(h_b, p_a, cfg.ye) * kNatsToBits : 0.0;
    const double net_bits = bob_bits - eve_bits;
    out.per_slot_bob.push_back(bob_bits);
    out.per_slot_eve.push_back(eve_bits);
    out.per_slot_net.push_back(net_bits);
    sum += net_bits;
  }
  out.average_rate = sum / static_cast<double>(n_slots);
  return out;
}

}  // namespace uavsec
