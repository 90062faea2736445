#ifndef MC_AXIOMS_HPP
#define MC_AXIOMS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "convergence.hpp"
#include "dilation_structures.hpp"
#include "errors.hpp"
#include "parallel.hpp"

namespace mc {

template <class Real>
using PointMap = std::function<ModelPoint<Real>(const ModelPoint<Real>&)>;

template <class Real>
using TangentDistance = typename DilationStructure<Real>::DistanceFn;

using IndexPair = std::pair<std::size_t, std::size_t>;

// ---------------------------------------------------------------- A0, A1, A2

template <class Real>
struct AxiomSample {
  ModelPoint<Real> x;
  Real eps;
  Real mu;
  ModelPoint<Real> u;
};

struct A1A2Residuals {
  double a1 = 0.0;
  double a2 = 0.0;
  std::size_t skipped = 0;  // samples with u outside the domain of x
};

/// a1 = max of d(delta^x_eps x, x) and d(delta^x_1 u, u);
/// a2 = max of d(delta^x_eps delta^x_mu u, delta^x_{eps mu} u).
template <class Real>
A1A2Residuals check_A1_A2(const DilationStructure<Real>& s, const std::vector<AxiomSample<Real>>& sample) {
  std::vector<char> inside(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) { inside[i] = s.in_domain(sample[i].x, sample[i].u) ? 1 : 0; });
  A1A2Residuals r;
  for (char c : inside) r.skipped += c ? 0 : 1;
  r.a1 = parallel_max(sample.size(), [&](std::size_t i) -> double {
    if (!inside[i]) return 0.0;
    const auto& q = sample[i];
    const Real fixed = s.distance(s.dilate(q.x, q.eps, q.x), q.x);
    const Real unit = s.distance(s.dilate(q.x, Real(1), q.u), q.u);
    return static_cast<double>(fixed > unit ? fixed : unit);
  });
  r.a2 = parallel_max(sample.size(), [&](std::size_t i) -> double {
    if (!inside[i]) return 0.0;
    const auto& q = sample[i];
    const auto lhs = s.dilate(q.x, q.eps, s.dilate(q.x, q.mu, q.u));
    const auto rhs = s.dilate(q.x, q.eps * q.mu, q.u);
    return static_cast<double>(s.distance(lhs, rhs));
  });
  return r;
}

struct A0Report {
  bool inner = true;  // B(x,eps) inside delta^x_eps B(x,A)
  bool outer = true;  // delta^x_eps B(x,A) inside delta^x_eps B(x,B)
  double worst_inner = 0.0;  // max d(x, delta^x_{1/eps} p) over p in B(x,eps)
  double worst_outer = 0.0;  // max d(x, delta^x_{1/eps} delta^x_eps w) over w in B(x,A)
  bool ok() const { return inner && outer; }
};

/// Samples the inclusion chain of axiom A0 by pulling points back with
/// delta^x_{1/eps} and measuring their distance to x.
template <class Real, class Rng>
A0Report check_A0(const DilationStructure<Real>& s, const ModelPoint<Real>& x,
                  const std::vector<double>& schedule, std::size_t per_scale, Rng& rng) {
  A0Report r;
  const auto& k = s.constants();
  const auto wide = sample_ball(s, x, static_cast<double>(k.a), per_scale, rng);
  for (double e : schedule) {
    const Real eps(e);
    const auto small = sample_ball(s, x, e, per_scale, rng);
    r.worst_inner = std::max(r.worst_inner, parallel_max(small.size(), [&](std::size_t i) {
      return static_cast<double>(s.distance(x, s.dilate(x, Real(1) / eps, small[i])));
    }));
    r.worst_outer = std::max(r.worst_outer, parallel_max(wide.size(), [&](std::size_t i) {
      return static_cast<double>(s.distance(x, s.dilate(x, Real(1) / eps, s.dilate(x, eps, wide[i]))));
    }));
  }
  r.inner = r.worst_inner < static_cast<double>(k.a);
  r.outer = r.worst_outer < static_cast<double>(k.b);
  return r;
}

// ---------------------------------------------------------------------- A3

template <class Real>
struct A3Result {
  ConvergenceEstimate estimate;
  TangentDistance<Real> tangent;  // the d^x used (guess or finest rescaled distance)
  bool self_consistent = false;
};

namespace detail {
template <class Real>
void require_nondegenerate(const std::vector<ModelPoint<Real>>& points, const std::vector<IndexPair>& pairs) {
  for (const auto& [i, j] : pairs) {
    if (i >= points.size() || j >= points.size()) throw ArgumentError("sample pair index out of range");
  }
  for (const auto& [i, j] : pairs)
    if (!(points[i] == points[j])) return;
  throw ArgumentError("degenerate sample: every pair has identical points");
}

inline void require_schedule(const std::vector<double>& schedule) {
  if (schedule.size() < 2) throw ArgumentError("schedule needs at least two scales");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0 && schedule[i] < 1.0)) throw ArgumentError("schedule entries must lie in (0,1)");
    if (i > 0 && !(schedule[i] < schedule[i - 1])) throw ArgumentError("schedule must be strictly decreasing");
  }
}
}  // namespace detail

/// Rescaled distance (1/eps) d(delta^x_eps u, delta^x_eps v).
template <class Real>
Real rescaled_distance(const DilationStructure<Real>& s, const ModelPoint<Real>& x, const Real& eps,
                       const ModelPoint<Real>& u, const ModelPoint<Real>& v) {
  return s.distance(s.dilate(x, eps, u), s.dilate(x, eps, v)) / eps;
}

/// Residual table of |(1/eps) d(delta u, delta v) - d^x(u,v)| over the sampled
/// pairs. Without a guess, d^x is the rescaled distance at the finest scale
/// and the table holds Cauchy differences between consecutive scales, each
/// attached to the finer one.
template <class Real>
A3Result<Real> check_A3(const DilationStructure<Real>& s, const ModelPoint<Real>& x,
                        std::optional<TangentDistance<Real>> guess,
                        const std::vector<ModelPoint<Real>>& points, const std::vector<IndexPair>& pairs,
                        const std::vector<double>& schedule, double noise_floor = 1e-12) {
  detail::require_schedule(schedule);
  detail::require_nondegenerate(points, pairs);
  A3Result<Real> out;
  std::vector<double> residuals;
  if (guess) {
    out.tangent = *guess;
    for (double e : schedule) {
      residuals.push_back(parallel_max(pairs.size(), [&](std::size_t p) {
        const auto& u = points[pairs[p].first];
        const auto& v = points[pairs[p].second];
        using std::abs;
        return static_cast<double>(abs(rescaled_distance(s, x, Real(e), u, v) - (*guess)(u, v)));
      }));
    }
    out.estimate = estimate_convergence(schedule, std::move(residuals), noise_floor);
    return out;
  }
  out.self_consistent = true;
  const Real finest(schedule.back());
  out.tangent = [s, x, finest](const ModelPoint<Real>& u, const ModelPoint<Real>& v) {
    return rescaled_distance(s, x, finest, u, v);
  };
  std::vector<double> finer(schedule.begin() + 1, schedule.end());
  for (std::size_t k = 0; k + 1 < schedule.size(); ++k) {
    const Real e0(schedule[k]), e1(schedule[k + 1]);
    residuals.push_back(parallel_max(pairs.size(), [&](std::size_t p) {
      const auto& u = points[pairs[p].first];
      const auto& v = points[pairs[p].second];
      using std::abs;
      return static_cast<double>(abs(rescaled_distance(s, x, e1, u, v) - rescaled_distance(s, x, e0, u, v)));
    }));
  }
  out.estimate = estimate_convergence(std::move(finer), std::move(residuals), noise_floor);
  return out;
}

// ------------------------------------------------------ A4 and tangent ops

namespace detail {
template <class Real>
void require_difference_domain(const DilationStructure<Real>& s, const ModelPoint<Real>& x, const Real& eps,
                               const ModelPoint<Real>& u, const ModelPoint<Real>& v) {
  if (!s.in_domain(x, u)) throw DomainError("u is outside U(x): d(x,u) exceeds the domain radius");
  if (!s.in_domain(x, v)) throw DomainError("v is outside U(x): d(x,v) exceeds the domain radius");
  const auto du = s.dilate(x, eps, u);
  const auto dv = s.dilate(x, eps, v);
  // W_{1/eps}(y) is taken as delta^y_eps B(y, B).
  if (!(s.distance(du, s.dilate(du, Real(1) / eps, dv)) < s.constants().b))
    throw DomainError("delta^x_eps v is outside W_{1/eps}(delta^x_eps u)");
}

/// Value at 0 of the polynomial through (e_i, y_i), coordinatewise.
template <class Real>
ModelPoint<Real> extrapolate_to_zero(const std::vector<Real>& e, const std::vector<ModelPoint<Real>>& y) {
  ModelPoint<Real> out(y.front().dim);
  for (std::size_t i = 0; i < e.size(); ++i) {
    Real w(1);
    for (std::size_t j = 0; j < e.size(); ++j)
      if (j != i) w *= e[j] / (e[j] - e[i]);
    out = out + w * y[i];
  }
  return out;
}
}  // namespace detail

/// Delta^x_eps(u,v) = delta^{delta^x_eps u}_{1/eps} delta^x_eps v.
template <class Real>
ModelPoint<Real> difference(const DilationStructure<Real>& s, const ModelPoint<Real>& x, const Real& eps,
                            const ModelPoint<Real>& u, const ModelPoint<Real>& v) {
  detail::require_difference_domain(s, x, eps, u, v);
  const auto du = s.dilate(x, eps, u);
  return s.dilate(du, Real(1) / eps, s.dilate(x, eps, v));
}

/// Sigma^x_eps(u,v) = delta^x_{1/eps} delta^{delta^x_eps u}_eps v.
template <class Real>
ModelPoint<Real> tangent_sum(const DilationStructure<Real>& s, const ModelPoint<Real>& x, const Real& eps,
                             const ModelPoint<Real>& u, const ModelPoint<Real>& v) {
  detail::require_difference_domain(s, x, eps, u, v);
  return s.dilate(x, Real(1) / eps, s.dilate(s.dilate(x, eps, u), eps, v));
}

/// inv^x_eps(u) = Delta^x_eps(u, x).
template <class Real>
ModelPoint<Real> tangent_inverse(const DilationStructure<Real>& s, const ModelPoint<Real>& x, const Real& eps,
                                 const ModelPoint<Real>& u) {
  return difference(s, x, eps, u, x);
}

enum class TangentOp { Difference, Sum, Inverse };

/// Limit of a tangent operation as eps -> 0: polynomial extrapolation through
/// the three finest schedule entries. Exact when the operation is a
/// polynomial of degree <= 2 in eps, which covers the shipped models.
template <class Real>
ModelPoint<Real> tangent_limit(const DilationStructure<Real>& s, TangentOp op, const ModelPoint<Real>& x,
                               const ModelPoint<Real>& u, const ModelPoint<Real>& v,
                               const std::vector<double>& schedule) {
  if (schedule.size() < 3) throw ArgumentError("tangent_limit needs at least three scales");
  std::vector<Real> e;
  std::vector<ModelPoint<Real>> y;
  for (std::size_t k = schedule.size() - 3; k < schedule.size(); ++k) {
    const Real eps(schedule[k]);
    e.push_back(eps);
    switch (op) {
      case TangentOp::Difference: y.push_back(difference(s, x, eps, u, v)); break;
      case TangentOp::Sum: y.push_back(tangent_sum(s, x, eps, u, v)); break;
      case TangentOp::Inverse: y.push_back(tangent_inverse(s, x, eps, u)); break;
    }
  }
  return detail::extrapolate_to_zero(e, y);
}

template <class Real>
struct A4Result {
  ConvergenceEstimate estimate;             // Cauchy table attached to the finer scale
  std::vector<ModelPoint<Real>> finest;     // Delta at the finest scale, one per pair
  std::vector<ModelPoint<Real>> limit;      // extrapolated Delta^x(u,v)
};

/// Cauchy residual max d(Delta_{eps_k}(u,v), Delta_{eps_{k+1}}(u,v)) over the pairs.
template <class Real>
A4Result<Real> check_A4(const DilationStructure<Real>& s, const ModelPoint<Real>& x,
                        const std::vector<ModelPoint<Real>>& points, const std::vector<IndexPair>& pairs,
                        const std::vector<double>& schedule, double noise_floor = 1e-12) {
  detail::require_schedule(schedule);
  detail::require_nondegenerate(points, pairs);
  const std::size_t n = pairs.size(), m = schedule.size();
  // table[k][p] = Delta_{eps_k}(u_p, v_p)
  std::vector<std::vector<ModelPoint<Real>>> table(m, std::vector<ModelPoint<Real>>(n));
  for (std::size_t k = 0; k < m; ++k) {
    const Real eps(schedule[k]);
    parallel_for(n, [&](std::size_t p) {
      table[k][p] = difference(s, x, eps, points[pairs[p].first], points[pairs[p].second]);
    });
  }
  std::vector<double> residuals;
  for (std::size_t k = 0; k + 1 < m; ++k)
    residuals.push_back(parallel_max(n, [&](std::size_t p) {
      return static_cast<double>(s.distance(table[k][p], table[k + 1][p]));
    }));
  A4Result<Real> out;
  out.estimate = estimate_convergence(std::vector<double>(schedule.begin() + 1, schedule.end()),
                                      std::move(residuals), noise_floor);
  out.finest = table.back();
  out.limit.resize(n);
  if (m >= 3) {
    std::vector<Real> e{Real(schedule[m - 3]), Real(schedule[m - 2]), Real(schedule[m - 1])};
    parallel_for(n, [&](std::size_t p) {
      out.limit[p] = detail::extrapolate_to_zero(e, std::vector<ModelPoint<Real>>{table[m - 3][p], table[m - 2][p],
                                                                                 table[m - 1][p]});
    });
  } else {
    out.limit = out.finest;
  }
  return out;
}

// ------------------------------------------------- transport and magnify

/// Structure carried over by an invertible map f: distances and dilations are
/// pulled back through fInverse.
template <class Real>
DilationStructure<Real> transport(const DilationStructure<Real>& s, PointMap<Real> f, PointMap<Real> fInverse,
                                  const std::vector<ModelPoint<Real>>& sample) {
  for (const auto& p : sample) {
    if (coordinate_gap(f(fInverse(p)), p) > 1e-9 || coordinate_gap(fInverse(f(p)), p) > 1e-9)
      throw ArgumentError("transport: f and fInverse are not mutually inverse on the sample");
  }
  auto dist = s.distance_fn();
  auto dil = s.dilate_fn();
  return DilationStructure<Real>(
      s.name() + "*", s.dim(),
      [dist, fInverse](const ModelPoint<Real>& u, const ModelPoint<Real>& v) { return dist(fInverse(u), fInverse(v)); },
      [dil, f, fInverse](const ModelPoint<Real>& x, const Real& eps, const ModelPoint<Real>& u) {
        return f(dil(fInverse(x), eps, fInverse(u)));
      },
      {}, {}, {}, s.constants());
}

/// Magnification of V_eps(x) back to U(x): distance (1/eps) d(delta u, delta v),
/// dilation based at u with coefficient mu given by
/// delta^x_{1/eps} delta^{delta^x_eps u}_mu delta^x_eps v.
template <class Real>
DilationStructure<Real> magnify(const DilationStructure<Real>& s, const ModelPoint<Real>& x, const Real& eps) {
  if (!(eps > Real(0) && eps < Real(1))) throw ArgumentError("magnify: eps must lie in (0,1)");
  return DilationStructure<Real>(
      s.name() + "@" + std::to_string(static_cast<double>(eps)), s.dim(),
      [s, x, eps](const ModelPoint<Real>& u, const ModelPoint<Real>& v) { return rescaled_distance(s, x, eps, u, v); },
      [s, x, eps](const ModelPoint<Real>& u, const Real& mu, const ModelPoint<Real>& v) {
        return s.dilate(x, Real(1) / eps, s.dilate(s.dilate(x, eps, u), mu, s.dilate(x, eps, v)));
      },
      s.offset_fn(), {}, {}, s.constants());
}

// -------------------------------------------------------------- linearity

struct LinearityResidual {
  double morphism = 0.0;   // d(delta^x_mu delta^u_eps v, delta^{delta^x_mu u}_eps delta^x_mu v)
  double homothety = 0.0;  // |d(delta^x_mu u, delta^x_mu v) - mu d(u,v)|
  std::size_t skipped = 0;
  double value() const { return morphism > homothety ? morphism : homothety; }
};

template <class Real>
LinearityResidual linearity_residual(const DilationStructure<Real>& s, const ModelPoint<Real>& x, const Real& mu,
                                     const std::vector<ModelPoint<Real>>& points,
                                     const std::vector<IndexPair>& pairs, const std::vector<double>& scales) {
  if (!(mu > Real(0) && mu < Real(1))) throw ArgumentError("linearity_residual: mu must lie in (0,1)");
  std::vector<char> inside(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p)
    inside[p] = s.in_domain(x, points[pairs[p].first]) && s.in_domain(x, points[pairs[p].second]);
  LinearityResidual r;
  for (char c : inside) r.skipped += c ? 0 : 1;
  r.homothety = parallel_max(pairs.size(), [&](std::size_t p) -> double {
    if (!inside[p]) return 0.0;
    const auto& u = points[pairs[p].first];
    const auto& v = points[pairs[p].second];
    using std::abs;
    return static_cast<double>(abs(s.distance(s.dilate(x, mu, u), s.dilate(x, mu, v)) - mu * s.distance(u, v)));
  });
  for (double e : scales) {
    const Real eps(e);
    r.morphism = std::max(r.morphism, parallel_max(pairs.size(), [&](std::size_t p) -> double {
      if (!inside[p]) return 0.0;
      const auto& u = points[pairs[p].first];
      const auto& v = points[pairs[p].second];
      const auto lhs = s.dilate(x, mu, s.dilate(u, eps, v));
      const auto rhs = s.dilate(s.dilate(x, mu, u), eps, s.dilate(x, mu, v));
      return static_cast<double>(s.distance(lhs, rhs));
    }));
  }
  return r;
}

// ------------------------------------------------------- conical groups

struct CheckItem {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ConicalReport {
  std::vector<CheckItem> items;
  ConvergenceEstimate h0;  // max |delta_eps x| along the schedule

  bool ok() const {
    for (const auto& i : items)
      if (!i.pass) return false;
    return h0.verdict == Verdict::Converges;
  }
  const CheckItem& operator[](const std::string& name) const {
    for (const auto& i : items)
      if (i.name == name) return i;
    throw ArgumentError("no conical check named '" + name + "'");
  }
};

/// Normed-group-with-dilations checks for the Heisenberg group on `sample`
/// (points in the unit gauge ball) paired as (sample[i], sample[i+1]).
template <class Real>
ConicalReport conical_checks(const std::vector<ModelPoint<Real>>& sample, const std::vector<double>& schedule,
                             const std::vector<IndexPair>& pairs) {
  using H = HeisenbergGroup<Real>;
  using std::abs;
  detail::require_schedule(schedule);
  ConicalReport r;
  auto add = [&](std::string name, double value, double tol) {
    r.items.push_back({std::move(name), value, tol, value <= tol});
  };
  const auto e = H::identity();
  double ident = static_cast<double>(H::gauge(e));
  for (double s : schedule) ident = std::max(ident, static_cast<double>(H::gauge(H::delta(Real(s), e))));
  add("identity", ident, 0.0);

  std::vector<double> h0;
  double h1 = 0, h2 = 0, hom = 0, homlim = 0, morph = 0;
  for (double sc : schedule) {
    const Real eps(sc);
    h0.push_back(parallel_max(sample.size(), [&](std::size_t i) {
      return static_cast<double>(H::gauge(H::delta(eps, sample[i])));
    }));
    h1 = std::max(h1, parallel_max(pairs.size(), [&](std::size_t p) {
      const auto& a = sample[pairs[p].first];
      const auto& b = sample[pairs[p].second];
      const auto beta = H::delta(Real(1) / eps, H::mul(H::delta(eps, a), H::delta(eps, b)));
      return static_cast<double>(H::distance(beta, H::mul(a, b)));
    }));
    h2 = std::max(h2, parallel_max(sample.size(), [&](std::size_t i) {
      const auto g = H::delta(Real(1) / eps, H::inv(H::delta(eps, sample[i])));
      return static_cast<double>(H::distance(g, H::inv(sample[i])));
    }));
    hom = std::max(hom, parallel_max(sample.size(), [&](std::size_t i) {
      return static_cast<double>(abs(H::gauge(H::delta(eps, sample[i])) - eps * H::gauge(sample[i])));
    }));
    homlim = std::max(homlim, parallel_max(sample.size(), [&](std::size_t i) {
      return static_cast<double>(abs(H::gauge(H::delta(eps, sample[i])) / eps - H::gauge(sample[i])));
    }));
    morph = std::max(morph, parallel_max(pairs.size(), [&](std::size_t p) {
      const auto& a = sample[pairs[p].first];
      const auto& b = sample[pairs[p].second];
      return static_cast<double>(H::distance(H::delta(eps, H::mul(a, b)), H::mul(H::delta(eps, a), H::delta(eps, b))));
    }));
  }
  r.h0 = estimate_convergence(schedule, h0);
  add("H1_product_limit", h1, 1e-12);
  add("H2_inverse_limit", h2, 1e-12);

  // (a) and (e): the gauge vanishes exactly at the identity.
  double faithful = 0.0;
  for (const auto& p : sample) {
    const bool is_e = p == e;
    const bool zero = H::gauge(p) == Real(0);
    if (is_e != zero) faithful = 1.0;
  }
  add("norm_a_positive", faithful, 0.0);
  const double sub = parallel_max(
      pairs.size(),
      [&](std::size_t p) {
        const auto& a = sample[pairs[p].first];
        const auto& b = sample[pairs[p].second];
        return static_cast<double>(H::gauge(H::mul(a, b)) - H::gauge(a) - H::gauge(b));
      },
      -std::numeric_limits<double>::infinity());
  add("norm_b_subadditive", std::max(0.0, sub), 1e-15);
  add("norm_c_symmetric", parallel_max(sample.size(), [&](std::size_t i) {
        return static_cast<double>(abs(H::gauge(H::inv(sample[i])) - H::gauge(sample[i])));
      }), 1e-15);
  add("norm_d_homogeneity_limit", homlim, 1e-12);
  add("norm_e_faithful", faithful, 0.0);
  add("gauge_homogeneity", hom, 1e-14);
  add("dilation_morphism", morph, 1e-12);
  return r;
}

// ------------------------------------------------------ Pansu derivative

/// Residual table of (1/eps) dbar(f(delta^x_eps u), deltabar^{f(x)}_eps L(u))
/// over `sample` (points of the unit ball around x). L must commute with the
/// dilations first: L(delta^x_eps u) = deltabar^{f(x)}_eps L(u) to 1e-9.
template <class Real>
ConvergenceEstimate pansu_residual(const DilationStructure<Real>& src, const DilationStructure<Real>& dst,
                                   const PointMap<Real>& f, const PointMap<Real>& L, const ModelPoint<Real>& x,
                                   const std::vector<ModelPoint<Real>>& sample, const std::vector<double>& schedule,
                                   double noise_floor = 1e-12) {
  detail::require_schedule(schedule);
  if (sample.empty()) throw ArgumentError("pansu_residual: empty sample");
  const auto fx = f(x);
  double commute = 0.0;
  for (double e : schedule) {
    const Real eps(e);
    commute = std::max(commute, parallel_max(sample.size(), [&](std::size_t i) {
      return static_cast<double>(dst.distance(L(src.dilate(x, eps, sample[i])), dst.dilate(fx, eps, L(sample[i]))));
    }));
  }
  if (!(commute <= 1e-9)) throw ArgumentError("not a conical morphism (commutation residual " + std::to_string(commute) + ")");
  std::vector<double> residuals;
  for (double e : schedule) {
    const Real eps(e);
    residuals.push_back(parallel_max(sample.size(), [&](std::size_t i) {
      return static_cast<double>(dst.distance(f(src.dilate(x, eps, sample[i])), dst.dilate(fx, eps, L(sample[i]))) / eps);
    }));
  }
  return estimate_convergence(schedule, std::move(residuals), noise_floor);
}

/// Candidate derivative u -> f(x) + J (u - x) for a Euclidean map.
template <class Real>
PointMap<Real> affine_candidate(ModelPoint<Real> fx, ModelPoint<Real> x, std::vector<std::vector<double>> J) {
  return [fx, x, J](const ModelPoint<Real>& u) {
    ModelPoint<Real> out = fx;
    for (std::size_t i = 0; i < J.size(); ++i)
      for (std::size_t j = 0; j < J[i].size(); ++j) out[i] += Real(J[i][j]) * (u[j] - x[j]);
    return out;
  };
}

/// Candidate derivative u -> f(x) (x^{-1} u) for a Heisenberg map: the
/// identity morphism carried to the base points.
template <class Real>
PointMap<Real> heisenberg_translation_candidate(ModelPoint<Real> fx, ModelPoint<Real> x) {
  using H = HeisenbergGroup<Real>;
  return [fx, x](const ModelPoint<Real>& u) { return H::mul(fx, H::mul(H::inv(x), u)); };
}

// ------------------------------------------------------------ suite

struct AxiomOptions {
  std::size_t samples = 10000;
  std::size_t pairs = 10000;
  std::vector<double> schedule = dyadic_schedule(3, 10);
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> base_points;  // empty: origin plus two offsets
};

template <class Real>
struct AxiomReport {
  std::string structure;
  A0Report a0;
  double a1 = 0.0;
  double a2 = 0.0;
  std::size_t skipped = 0;
  ConvergenceEstimate a3;
  ConvergenceEstimate a4;
  bool a3_self_consistent = false;
  double linearity = 0.0;
  std::vector<std::vector<double>> a4_limits;  // extrapolated Delta at the first base point
};

namespace detail {
inline std::vector<std::vector<double>> default_bases(std::size_t dim) {
  std::vector<std::vector<double>> b(3, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) {
    b[1][i] = 0.25 * static_cast<double>(i + 1);
    b[2][i] = -0.5 + 0.125 * static_cast<double>(i);
  }
  return b;
}

template <class Real>
ModelPoint<Real> to_point(const std::vector<double>& v) {
  ModelPoint<Real> p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = Real(v[i]);
  return p;
}

inline std::vector<IndexPair> random_pairs(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<IndexPair> out(count);
  for (auto& p : out) {
    p.first = pick(rng);
    p.second = pick(rng);
  }
  return out;
}

inline void merge_max(ConvergenceEstimate& into, const ConvergenceEstimate& e, bool first) {
  if (first) {
    into = e;
    return;
  }
  for (std::size_t i = 0; i < into.residuals.size(); ++i)
    into.residuals[i] = std::max(into.residuals[i], e.residuals[i]);
}
}  // namespace detail

/// Runs A0-A4 and the linearity residual, taking the max of every residual
/// over the base points. Without a tangent guess A3 runs in self-consistency
/// mode.
template <class Real>
AxiomReport<Real> axiom_suite(const DilationStructure<Real>& s, std::optional<TangentDistance<Real>> guess,
                              const AxiomOptions& opt, double noise_floor = 1e-12) {
  if (opt.samples < 2 || opt.pairs < 1) throw ArgumentError("axiom suite needs at least two samples and one pair");
  std::mt19937_64 rng(opt.seed);
  AxiomReport<Real> rep;
  rep.structure = s.name();
  rep.a3_self_consistent = !guess.has_value();
  const auto bases = opt.base_points.empty() ? detail::default_bases(s.dim()) : opt.base_points;
  const auto& k = s.constants();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ConvergenceEstimate a3, a4;
  for (std::size_t b = 0; b < bases.size(); ++b) {
    if (bases[b].size() != s.dim()) throw ArgumentError("base point has the wrong dimension");
    const auto x = detail::to_point<Real>(bases[b]);
    const auto a0 = check_A0(s, x, opt.schedule, std::max<std::size_t>(64, opt.samples / 20), rng);
    rep.a0.inner = rep.a0.inner && a0.inner;
    rep.a0.outer = rep.a0.outer && a0.outer;
    rep.a0.worst_inner = std::max(rep.a0.worst_inner, a0.worst_inner);
    rep.a0.worst_outer = std::max(rep.a0.worst_outer, a0.worst_outer);

    const auto unit_ball = sample_ball(s, x, static_cast<double>(k.domain_radius), opt.samples, rng);
    std::vector<AxiomSample<Real>> samp(unit_ball.size());
    for (std::size_t i = 0; i < samp.size(); ++i)
      samp[i] = {x, Real(unit(rng)), Real(unit(rng)), unit_ball[i]};
    const auto a12 = check_A1_A2(s, samp);
    rep.a1 = std::max(rep.a1, a12.a1);
    rep.a2 = std::max(rep.a2, a12.a2);
    rep.skipped += a12.skipped;

    const auto wide = sample_ball(s, x, static_cast<double>(k.a), opt.samples, rng);
    const auto wide_pairs = detail::random_pairs(wide.size(), opt.pairs, rng);
    const auto r3 = check_A3(s, x, guess, wide, wide_pairs, opt.schedule, noise_floor);
    detail::merge_max(a3, r3.estimate, b == 0);

    const auto unit_pairs = detail::random_pairs(unit_ball.size(), opt.pairs, rng);
    const auto r4 = check_A4(s, x, unit_ball, unit_pairs, opt.schedule, noise_floor);
    detail::merge_max(a4, r4.estimate, b == 0);
    if (b == 0) {
      const std::size_t shown = std::min<std::size_t>(8, r4.limit.size());
      for (std::size_t i = 0; i < shown; ++i) rep.a4_limits.push_back(r4.limit[i].to_doubles());
    }
    const auto lin = linearity_residual(s, x, Real(0.5), unit_ball, unit_pairs, {0.5, 0.25});
    rep.linearity = std::max(rep.linearity, lin.value());
  }
  rep.a3 = estimate_convergence(a3.schedule, a3.residuals, noise_floor);
  rep.a4 = estimate_convergence(a4.schedule, a4.residuals, noise_floor);
  return rep;
}

}  // namespace mc

#endif  // MC_AXIOMS_HPP
