#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavsec/geometry.hpp"

// Problem geometry, physical constants, discretization, and feasibility
// checks for trajectories and power schedules. All quantities are stored in
// linear units (meters, seconds, watts, dimensionless gains); dB / dBm values
// are converted at the config-file boundary.

namespace uavsec {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Transmitter or receiver fixed on the ground (z must be exactly 0).
struct GroundNode {
  Vec3 position;
};

/// Full scenario description. Default values reproduce the reference
/// simulation setup bundled with the CLI.
struct ScenarioConfig {
  GroundNode alice{{0.0, 0.0, 0.0}};
  GroundNode bob{{300.0, 0.0, 0.0}};
  Vec3 q0{-100.0, 100.0, 100.0};  // initial UAV point
  Vec3 qf{500.0, 100.0, 100.0};   // final UAV point
  double altitude_m = 100.0;
  double speed_mps = 3.0;
  double slot_s = 0.5;
  int num_slots = 400;
  double semi_major_m = 450.0;    // coverage-ellipse size parameter a
  double beta0 = 1e9;             // reference SNR at 1 m, linear (90 dB)
  double pathloss_exp = 3.4;      // ground path-loss exponent
  double ye = 0.1;                // Eve's average received envelope power, linear (20 dBm)
  double pa_max_w = 3.9810717055349722;  // 36 dBm
  double pa_avg_w = 1.0;                 // 30 dBm
  double pu_max_w = 0.04;                // 4x the average UAV power
  double pu_avg_w = 0.01;                // 10 dBm
  double theta = 1e-5;            // relative-error stopping threshold
  int max_iters = 200;
};

/// UAV sample points, one per time slot.
struct Trajectory {
  std::vector<Vec3> points;
};

/// Per-slot transmit powers for Alice (pa) and the UAV jammer (pu), watts.
struct PowerSchedule {
  std::vector<double> pa_w;
  std::vector<double> pu_w;
};

/// Positive strictly inside the coverage ellipse with foci at Alice and Bob:
/// 2a - |q - w_a| - |q - w_b|, full 3-D distances (altitude included).
inline double ellipse_margin(const Vec3& q, const ScenarioConfig& cfg) {
  return 2.0 * cfg.semi_major_m - distance(q, cfg.alice.position) - distance(q, cfg.bob.position);
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace detail

/// Checks every scenario invariant and reports each violation with its
/// numeric margin. An empty result means the config is feasible.
/// Violations are data, not failures.
inline std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
  std::vector<std::string> v;
  using detail::num;

  if (cfg.alice.position.z != 0.0)
    v.push_back("alice z-coordinate must be 0, got " + num(cfg.alice.position.z));
  if (cfg.bob.position.z != 0.0)
    v.push_back("bob z-coordinate must be 0, got " + num(cfg.bob.position.z));
  if (!(cfg.altitude_m > 0.0)) v.push_back("altitude must be > 0, got " + num(cfg.altitude_m));
  if (!(cfg.speed_mps > 0.0)) v.push_back("speed must be > 0, got " + num(cfg.speed_mps));
  if (!(cfg.slot_s > 0.0)) v.push_back("slot duration must be > 0, got " + num(cfg.slot_s));
  if (cfg.num_slots < 2) v.push_back("num_slots must be >= 2, got " + num(cfg.num_slots));
  if (!(cfg.semi_major_m > 0.0))
    v.push_back("semi-major parameter must be > 0, got " + num(cfg.semi_major_m));
  if (!(cfg.beta0 > 0.0)) v.push_back("reference SNR must be > 0, got " + num(cfg.beta0));
  if (!(cfg.pathloss_exp > 0.0)) v.push_back("path-loss exponent must be > 0, got " + num(cfg.pathloss_exp));
  if (!(cfg.ye > 0.0)) v.push_back("envelope power ye must be > 0, got " + num(cfg.ye));
  if (!(cfg.theta > 0.0)) v.push_back("theta must be > 0, got " + num(cfg.theta));
  if (cfg.max_iters < 1) v.push_back("max_iters must be >= 1, got " + num(cfg.max_iters));

  const double focal = distance(cfg.alice.position, cfg.bob.position);
  if (!(2.0 * cfg.semi_major_m > focal)) {
    v.push_back("ellipse degenerate: 2a = " + num(2.0 * cfg.semi_major_m) +
                " must exceed the Alice-Bob distance " + num(focal));
  }

  const double reach = cfg.num_slots * cfg.speed_mps * cfg.slot_s;
  const double endpoint_dist = distance(cfg.qf, cfg.q0);
  if (reach + 1e-9 < endpoint_dist) {
    v.push_back("unreachable final point: N*V*delta = " + num(reach) + " < |qf - q0| = " +
                num(endpoint_dist));
  }

  if (cfg.q0.z != cfg.altitude_m)
    v.push_back("q0 altitude " + num(cfg.q0.z) + " != H = " + num(cfg.altitude_m));
  if (cfg.qf.z != cfg.altitude_m)
    v.push_back("qf altitude " + num(cfg.qf.z) + " != H = " + num(cfg.altitude_m));
  const double m0 = ellipse_margin(cfg.q0, cfg);
  if (m0 < -1e-9) v.push_back("q0 outside coverage ellipse by " + num(-m0) + " m");
  const double mf = ellipse_margin(cfg.qf, cfg);
  if (mf < -1e-9) v.push_back("qf outside coverage ellipse by " + num(-mf) + " m");

  if (!(cfg.pa_avg_w > 0.0)) v.push_back("average source power must be > 0, got " + num(cfg.pa_avg_w));
  if (cfg.pa_avg_w > cfg.pa_max_w)
    v.push_back("average source power " + num(cfg.pa_avg_w) + " exceeds peak " + num(cfg.pa_max_w));
  if (!(cfg.pu_avg_w > 0.0)) v.push_back("average UAV power must be > 0, got " + num(cfg.pu_avg_w));
  if (cfg.pu_avg_w > cfg.pu_max_w)
    v.push_back("average UAV power " + num(cfg.pu_avg_w) + " exceeds peak " + num(cfg.pu_max_w));

  return v;
}

inline std::string join_violations(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& item : v) {
    if (!s.empty()) s += "; ";
    s += item;
  }
  return s;
}

/// Direct flight path: N points uniformly spaced on the segment q0 -> qf with
/// the final point exactly at qf. The degenerate N = 1 case (single point at
/// qf) is allowed here even though full scenario validation requires N >= 2.
inline Trajectory straight_line_trajectory(const ScenarioConfig& cfg) {
  auto violations = validate_config(cfg);
  if (cfg.num_slots == 1) {
    std::erase_if(violations, [](const std::string& s) { return s.find("num_slots") != std::string::npos; });
  }
  if (cfg.num_slots < 1) violations.push_back("num_slots must be >= 1");
  if (!violations.empty()) {
    throw std::invalid_argument("straight_line_trajectory: invalid config: " + join_violations(violations));
  }
  Trajectory traj;
  traj.points.reserve(cfg.num_slots);
  const Vec3 delta = cfg.qf - cfg.q0;
  for (int n = 1; n <= cfg.num_slots; ++n) {
    Vec3 p = cfg.q0 + (static_cast<double>(n) / cfg.num_slots) * delta;
    p.z = cfg.altitude_m;
    traj.points.push_back(p);
  }
  traj.points.back() = cfg.qf;
  return traj;
}

/// Trajectory feasibility: per-slot speed bound, chained start, pinned end,
/// coverage ellipse, and constant altitude.
inline std::vector<std::string> trajectory_violations(const Trajectory& traj, const ScenarioConfig& cfg) {
  std::vector<std::string> v;
  using detail::num;
  const std::size_t n = traj.points.size();
  if (n != static_cast<std::size_t>(cfg.num_slots)) {
    v.push_back("trajectory has " + num(static_cast<double>(n)) + " points, expected " + num(cfg.num_slots));
    return v;
  }
  const double step_max = cfg.speed_mps * cfg.slot_s;
  const double slack = 1e-9 * std::max(1.0, step_max);
  const double d0 = distance(traj.points.front(), cfg.q0);
  if (d0 > step_max + slack)
    v.push_back("first hop " + num(d0) + " m exceeds V*delta = " + num(step_max));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = distance(traj.points[i + 1], traj.points[i]);
    if (d > step_max + slack) {
      v.push_back("hop " + num(static_cast<double>(i + 1)) + " of " + num(d) +
                  " m exceeds V*delta = " + num(step_max));
    }
  }
  if (distance(traj.points.back(), cfg.qf) > 1e-9)
    v.push_back("final point misses qf by " + num(distance(traj.points.back(), cfg.qf)) + " m");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(traj.points[i].z - cfg.altitude_m) > 1e-9)
      v.push_back("point " + num(static_cast<double>(i)) + " altitude " + num(traj.points[i].z) +
                  " != H = " + num(cfg.altitude_m));
    const double margin = ellipse_margin(traj.points[i], cfg);
    if (margin < -1e-9)
      v.push_back("point " + num(static_cast<double>(i)) + " outside coverage ellipse by " +
                  num(-margin) + " m");
  }
  return v;
}

/// Power-schedule feasibility: per-slot box bounds plus average caps.
inline std::vector<std::string> power_violations(const PowerSchedule& ps, const ScenarioConfig& cfg) {
  std::vector<std::string> v;
  using detail::num;
  const std::size_t n = static_cast<std::size_t>(cfg.num_slots);
  if (ps.pa_w.size() != n || ps.pu_w.size() != n) {
    v.push_back("power schedule length mismatch: pa has " + num(static_cast<double>(ps.pa_w.size())) +
                ", pu has " + num(static_cast<double>(ps.pu_w.size())) + ", expected " + num(cfg.num_slots));
    return v;
  }
  auto check = [&](const std::vector<double>& p, double peak, double avg, const char* who) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < -1e-12 || p[i] > peak + 1e-12)
        v.push_back(std::string(who) + " power slot " + num(static_cast<double>(i)) + " = " + num(p[i]) +
                    " outside [0, " + num(peak) + "]");
    }
    const double mean = std::accumulate(p.begin(), p.end(), 0.0) / p.size();
    if (mean > avg + 1e-12)
      v.push_back(std::string(who) + " mean power " + num(mean) + " exceeds average cap " + num(avg));
  };
  check(ps.pa_w, cfg.pa_max_w, cfg.pa_avg_w, "source");
  check(ps.pu_w, cfg.pu_max_w, cfg.pu_avg_w, "UAV");
  return v;
}

}  // namespace uavsec
