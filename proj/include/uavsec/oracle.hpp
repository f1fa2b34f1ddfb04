#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

// Independent brute-force verification tools: adaptive Simpson quadrature of
// the defining integrals, exhaustive grid search for tiny subproblem
// instances, and central finite-difference gradient checks.
//
// Nothing here calls the closed-form code paths it is used to verify; the
// quadrature relies on elementary functions only.

namespace uavsec::oracle {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value = 0.0;
  double est_abs_error = 0.0;
};

namespace detail {

inline double simpson(double h, double fa, double fm, double fb) {
  return (fa + 4.0 * fm + fb) * (h / 6.0);
}

// Recursive adaptive Simpson with Richardson error estimate. Throws if a
// panel cannot reach its local tolerance within max_depth halvings.
template <class F>
QuadratureResult simpson_adaptive(const F& f, double a, double m, double b, double fa, double fm,
                                  double fb, double whole, double tol, int depth, int max_depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(m - a, fa, flm, fm);
  const double right = simpson(b - m, fm, frm, fb);
  const double err_est = (left + right - whole) / 15.0;
  if (std::abs(err_est) <= tol) {
    return {left + right + err_est, std::abs(err_est)};
  }
  if (depth >= max_depth) {
    throw QuadratureError("adaptive Simpson did not converge within the refinement budget");
  }
  const QuadratureResult l =
      simpson_adaptive(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth);
  const QuadratureResult r =
      simpson_adaptive(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
  return {l.value + r.value, l.est_abs_error + r.est_abs_error};
}

}  // namespace detail

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 60) {
  if (!(tol > 0.0)) throw std::invalid_argument("adaptive_simpson: tol must be > 0");
  if (a == b) return {0.0, 0.0};
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = detail::simpson(b - a, fa, fm, fb);
  return detail::simpson_adaptive(f, a, m, b, fa, fm, fb, whole, tol, 0, max_depth);
}

/// Quadrature of the eavesdropper rate integral (natural-log scale)
///   int_0^{h_b} p_a exp(-h/y_e) / (1 + h p_a) dh.
/// The interval is truncated where exp(-h/y_e) underflows; the discarded
/// tail is below double precision.
inline QuadratureResult quadrature_eve_term(double h_b, double p_a, double y_e, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature_eve_term: tol must be > 0");
  if (!(y_e > 0.0)) throw std::invalid_argument("quadrature_eve_term: y_e must be > 0");
  if (h_b < 0.0 || p_a < 0.0) throw std::invalid_argument("quadrature_eve_term: negative input");
  if (h_b == 0.0 || p_a == 0.0) return {0.0, 0.0};
  const double hi = std::min(h_b, 745.0 * y_e);
  auto integrand = [=](double h) { return p_a * std::exp(-h / y_e) / (1.0 + h * p_a); };
  return adaptive_simpson(integrand, 0.0, hi, tol);
}

struct GridSpec {
  int dims = 0;
  int points_per_dim = 0;
  std::vector<std::pair<double, double>> bounds;  // per-dim [lo, hi]
  /// When set, only points with mean(coordinates) <= coupling_cap are
  /// feasible (filtering, not projection, so the oracle is exact on its grid).
  std::optional<double> coupling_cap;
};

struct GridResult {
  std::vector<double> point;
  double value = 0.0;
};

namespace detail {

struct GridSearchState {
  const GridSpec* spec = nullptr;
  const std::function<double(const std::vector<double>&)>* objective = nullptr;
  std::vector<double> point;
  std::vector<double> lo_tail_sums;  // sum of per-dim lower bounds from dim d onward
  double sum_cap = 0.0;
  double cap_slack = 0.0;
  std::uint64_t evaluations = 0;
  bool found = false;
  GridResult best;

  void recurse(int d, double partial_sum) {
    const GridSpec& s = *spec;
    if (d == s.dims) {
      if (++evaluations > 100000000ULL) {
        throw GridGuardError("grid_search: evaluation budget of 1e8 points exceeded");
      }
      const double v = (*objective)(point);
      if (!found || v > best.value) {
        found = true;
        best.point = point;
        best.value = v;
      }
      return;
    }
    const auto [lo, hi] = s.bounds[d];
    const double step = (s.points_per_dim > 1) ? (hi - lo) / (s.points_per_dim - 1) : 0.0;
    const int count = (s.points_per_dim > 1) ? s.points_per_dim : 1;
    for (int i = 0; i < count; ++i) {
      const double v = (i == count - 1) ? hi : lo + i * step;
      point[d] = v;
      if (spec->coupling_cap) {
        // Coordinates are enumerated in ascending order, so once even the
        // smallest completion of this prefix busts the cap, the rest do too.
        const double min_total = partial_sum + v + lo_tail_sums[d + 1];
        if (min_total > sum_cap + cap_slack) break;
      }
      recurse(d + 1, partial_sum + v);
    }
  }
};

}  // namespace detail

/// Exhaustive maximization of `objective` over the regular grid described by
/// `spec`. Deterministic tie-break: the lexicographically smallest argmax
/// wins. Returns nullopt when the coupling cap leaves no feasible point.
/// Guard: at most 1e8 objective evaluations (feasible points), else throws.
inline std::optional<GridResult> grid_search(const std::function<double(const std::vector<double>&)>& objective,
                                             const GridSpec& spec) {
  if (spec.dims <= 0 || static_cast<std::size_t>(spec.dims) != spec.bounds.size()) {
    throw std::invalid_argument("grid_search: dims must match bounds");
  }
  if (spec.points_per_dim < 2) throw std::invalid_argument("grid_search: points_per_dim must be >= 2");
  for (const auto& [lo, hi] : spec.bounds) {
    if (!(lo <= hi)) throw std::invalid_argument("grid_search: bound with lo > hi");
  }
  // Size guard on the unfiltered grid only when no coupling cap prunes it;
  // with a cap the exact evaluation counter enforces the same budget.
  if (!spec.coupling_cap) {
    double total = 1.0;
    for (int d = 0; d < spec.dims; ++d) total *= spec.points_per_dim;
    if (total > 1e8) throw GridGuardError("grid_search: grid size exceeds 1e8 guard");
  }

  detail::GridSearchState state;
  state.spec = &spec;
  state.objective = &objective;
  state.point.assign(spec.dims, 0.0);
  state.lo_tail_sums.assign(spec.dims + 1, 0.0);
  for (int d = spec.dims - 1; d >= 0; --d) {
    state.lo_tail_sums[d] = state.lo_tail_sums[d + 1] + spec.bounds[d].first;
  }
  if (spec.coupling_cap) {
    state.sum_cap = *spec.coupling_cap * spec.dims;
    state.cap_slack = 1e-12 * std::max(1.0, std::abs(state.sum_cap));
  }
  state.recurse(0, 0.0);
  if (!state.found) return std::nullopt;
  return state.best;
}

/// Central-difference check of an analytic gradient. Returns the worst
/// relative discrepancy across coordinates.
template <class F, class G>
double finite_diff_check(F&& f, G&& analytic_grad, const std::vector<double>& point, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_check: h must be > 0");
  double worst = 0.0;
  std::vector<double> x = point;
  for (std::size_t i = 0; i < point.size(); ++i) {
    x[i] = point[i] + h;
    const double fp = f(x);
    x[i] = point[i] - h;
    const double fm = f(x);
    x[i] = point[i];
    const double fd = (fp - fm) / (2.0 * h);
    const double an = analytic_grad(point, i);
    const double scale = std::max(std::abs(fd), std::abs(an));
    if (scale < 1e-14) continue;
    worst = std::max(worst, std::abs(fd - an) / scale);
  }
  return worst;
}

}  // namespace uavsec::oracle
