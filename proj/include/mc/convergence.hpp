#ifndef MC_CONVERGENCE_HPP
#define MC_CONVERGENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace mc {

enum class Verdict { Converges, Diverges, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converges: return "converges";
    case Verdict::Diverges: return "diverges";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Finite proxy for "residual(eps) -> 0 as eps -> 0": a residual table on a
/// decreasing schedule, the least-squares slope of log(residual) against
/// log(eps), and a verdict.
///
/// Residuals at or below `noise_floor` count as zero. If every residual is
/// at the floor the table is `exact`, the verdict is converges and the
/// fitted order is NaN (there is nothing to fit).
struct ConvergenceEstimate {
  std::vector<double> schedule;
  std::vector<double> residuals;
  double fitted_order = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::Inconclusive;
  bool exact = false;
  double noise_floor = 0.0;

  double finest() const { return residuals.back(); }
  double coarsest() const { return residuals.front(); }
};

/// Dyadic schedule 2^-first, ..., 2^-last.
inline std::vector<double> dyadic_schedule(int first, int last) {
  if (first > last) throw ArgumentError("dyadic_schedule: empty range");
  std::vector<double> s;
  for (int k = first; k <= last; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

/// Slope of log(residual) vs log(eps) over the entries above the floor.
inline double fit_order(const std::vector<double>& schedule, const std::vector<double>& residuals,
                        double noise_floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(residuals[i] > noise_floor)) continue;
    const double lx = std::log(schedule[i]);
    const double ly = std::log(residuals[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) return std::numeric_limits<double>::quiet_NaN();
  const double kk = static_cast<double>(k);
  return (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
}

/// Verdict rules, applied to the last half of the table (at least two
/// entries):
///  - converges: every step decreases (or lands at the floor) and the fitted
///    order is positive;
///  - diverges: every step increases and the fitted order is negative;
///  - inconclusive otherwise.
inline ConvergenceEstimate estimate_convergence(std::vector<double> schedule,
                                                std::vector<double> residuals,
                                                double noise_floor = 1e-12) {
  if (schedule.size() != residuals.size())
    throw ArgumentError("estimate_convergence: schedule and residuals differ in length");
  if (schedule.size() < 2) throw ArgumentError("estimate_convergence: need at least two scales");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0)) throw ArgumentError("estimate_convergence: scales must be positive");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw ArgumentError("estimate_convergence: schedule must be strictly decreasing");
    if (!(residuals[i] >= 0.0) || std::isnan(residuals[i]))
      throw ArgumentError("estimate_convergence: residuals must be nonnegative");
  }
  ConvergenceEstimate e;
  e.schedule = std::move(schedule);
  e.residuals = std::move(residuals);
  e.noise_floor = noise_floor;

  bool all_floor = true;
  for (double r : e.residuals) all_floor = all_floor && r <= noise_floor;
  if (all_floor) {
    e.exact = true;
    e.verdict = Verdict::Converges;
    return e;
  }
  e.fitted_order = fit_order(e.schedule, e.residuals, noise_floor);

  const std::size_t n = e.residuals.size();
  const std::size_t tail = std::max<std::size_t>(2, (n + 1) / 2);
  bool decaying = true, growing = true;
  for (std::size_t i = n - tail + 1; i < n; ++i) {
    const double prev = e.residuals[i - 1], cur = e.residuals[i];
    decaying = decaying && (cur < prev || cur <= noise_floor);
    growing = growing && cur > prev;
  }
  const bool tail_at_floor = e.residuals.back() <= noise_floor;
  if (decaying && (e.fitted_order > 0.0 || tail_at_floor))
    e.verdict = Verdict::Converges;
  else if (growing && e.fitted_order < 0.0)
    e.verdict = Verdict::Diverges;
  else
    e.verdict = Verdict::Inconclusive;
  return e;
}

}  // namespace mc

#endif  // MC_CONVERGENCE_HPP
