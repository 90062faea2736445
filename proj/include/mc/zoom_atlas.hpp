#ifndef MC_ZOOM_ATLAS_HPP
#define MC_ZOOM_ATLAS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "axioms.hpp"
#include "convergence.hpp"
#include "dilation_structures.hpp"
#include "errors.hpp"
#include "metric_core.hpp"
#include "parallel.hpp"
#include "relation_maps.hpp"

namespace mc {

using ZPoint = ModelPoint<double>;
using ZStructure = DilationStructure<double>;
using ZDistance = TangentDistance<double>;

/// Tangent distance d^x as a function of the base point x.
using TangentProvider = std::function<ZDistance(const ZPoint& base)>;

/// Provider backed by a known tangent distance (the same at every base), or,
/// without one, by the rescaled distance at the finest scale of `schedule`.
inline TangentProvider a3_tangent_provider(const ZStructure& s, std::optional<ZDistance> guess,
                                           const std::vector<double>& schedule) {
  if (guess) {
    return [g = *guess](const ZPoint&) { return g; };
  }
  if (schedule.empty()) throw ArgumentError("a3_tangent_provider: empty schedule");
  const double finest = schedule.back();
  return [s, finest](const ZPoint& x) -> ZDistance {
    return [s, x, finest](const ZPoint& u, const ZPoint& v) { return rescaled_distance(s, x, finest, u, v); };
  };
}

// ------------------------------------------------------------ templates

struct TemplateOptions {
  std::size_t generators = 24;  // points in the shell 1/2 < D <= 1
  int levels = 6;               // generators are copied at scales 2^0 .. 2^-levels
  bool lattice = false;         // use a lattice of step lattice_step instead
  double lattice_step = 0.25;
  std::size_t probes = 2000;    // for the covering radius
  std::uint64_t seed = 0;
};

/// Unit-ball sample of the map space. Index 0 is the center; level[i] is the
/// dyadic level of point i (-1 for the center and for lattice points).
struct ZoomTemplate {
  std::vector<ZPoint> points;
  std::vector<int> level;
  double cover = 0.0;  // covering radius of the unit D-ball by `points`
};

namespace detail {
inline double radical_inverse(std::size_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

inline ZPoint box_point(const ZPoint& box, const std::vector<double>& unit) {
  ZPoint w(box.dim);
  for (std::size_t k = 0; k < box.dim; ++k) w[k] = (2.0 * unit[k] - 1.0) * box[k];
  return w;
}
}  // namespace detail

/// Deterministic template: Halton generators in the D-shell (1/2, 1] around x,
/// dilated to every dyadic level, or a lattice offset from x clipped to the
/// unit D-ball.
inline ZoomTemplate make_template(const ZStructure& s, const ZPoint& x, const ZDistance& D,
                                  const TemplateOptions& opt = {}) {
  static constexpr unsigned primes[] = {2, 3, 5, 7};
  ZoomTemplate t;
  t.points.push_back(x);
  t.level.push_back(-1);
  const ZPoint box = s.ball_box(1.0);
  if (opt.lattice) {
    if (!(opt.lattice_step > 0.0)) throw ArgumentError("lattice step must be positive");
    const ZPoint step = s.lattice_step(opt.lattice_step);
    std::vector<long> lo(s.dim()), hi(s.dim()), k(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) {
      hi[i] = static_cast<long>(std::floor(box[i] / step[i]));
      lo[i] = -hi[i];
      k[i] = lo[i];
    }
    while (true) {
      bool zero = true;
      ZPoint w(s.dim());
      for (std::size_t i = 0; i < s.dim(); ++i) {
        w[i] = static_cast<double>(k[i]) * step[i];
        zero = zero && k[i] == 0;
      }
      const ZPoint p = s.offset(x, w);
      if (!zero && D(x, p) <= 1.0) {
        t.points.push_back(p);
        t.level.push_back(-1);
      }
      std::size_t i = 0;
      for (; i < s.dim(); ++i) {
        if (++k[i] <= hi[i]) break;
        k[i] = lo[i];
      }
      if (i == s.dim()) break;
    }
  } else {
    if (opt.generators == 0) throw ArgumentError("template needs at least one generator");
    std::vector<ZPoint> gens;
    for (std::size_t i = 1; gens.size() < opt.generators; ++i) {
      std::vector<double> u(s.dim());
      for (std::size_t k = 0; k < s.dim(); ++k) u[k] = detail::radical_inverse(i, primes[k]);
      const ZPoint p = s.offset(x, detail::box_point(box, u));
      const double r = D(x, p);
      if (r > 0.5 && r <= 1.0) gens.push_back(p);
      if (i > 1000000) throw ArgumentError("template: could not place generators in the unit shell");
    }
    for (int l = 0; l <= opt.levels; ++l) {
      const double scale = std::ldexp(1.0, -l);
      for (const auto& g : gens) {
        t.points.push_back(s.dilate(x, scale, g));
        t.level.push_back(l);
      }
    }
  }
  // covering radius against a seeded probe set of the unit D-ball
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ZPoint> probes;
  while (probes.size() < opt.probes) {
    std::vector<double> u(s.dim());
    for (auto& c : u) c = unit(rng);
    const ZPoint p = s.offset(x, detail::box_point(box, u));
    if (D(x, p) <= 1.0) probes.push_back(p);
  }
  t.cover = parallel_max(probes.size(), [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : t.points) best = std::min(best, D(probes[i], q));
    return best;
  });
  return t;
}

/// Pairs (i, j) with a[i] and b[j] equal up to rel * |a[i] - base| plus
/// abs * (1 + |base|), coordinatewise. The relative term separates points of
/// deeply dilated territories; the absolute one absorbs roundoff in base + w.
inline std::vector<std::pair<std::size_t, std::size_t>> match_points(const std::vector<ZPoint>& a,
                                                                     const std::vector<ZPoint>& b,
                                                                     const ZPoint& base, double rel = 1e-8,
                                                                     double abs = 1e-14) {
  std::vector<std::size_t> order(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return b[p][0] < b[q][0]; });
  double base_size = 0.0;
  for (std::size_t k = 0; k < base.dim; ++k) base_size = std::max(base_size, std::abs(base[k]));
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = rel * coordinate_gap(a[i], base) + abs * (1.0 + base_size);
    auto it = std::lower_bound(order.begin(), order.end(), a[i][0] - t,
                               [&](std::size_t j, double v) { return b[j][0] < v; });
    for (; it != order.end() && b[*it][0] <= a[i][0] + t; ++it)
      if (coordinate_gap(a[i], b[*it]) <= t) out.emplace_back(i, *it);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// -------------------------------------------------------- zoom sequences

/// rho^x_eps = {(delta^x_eps t_j, t_j)} for a fixed template t, one relation
/// per scale. Territory spaces carry the raw distance d; pixels carry D = d^x.
struct ZoomSequence {
  ZStructure structure;
  ZPoint x;
  ZDistance tangent;
  TangentProvider provider;
  TemplateOptions template_options;
  ZoomTemplate tmpl;
  SpacePtr pixels;
  std::vector<double> schedule;
  std::vector<std::vector<ZPoint>> territory;  // territory[k][j] = delta^x_{eps_k} t_j
  std::vector<Relation> relations;
  std::vector<double> modulus;  // F(eps_k)

  std::size_t index_of(double eps) const {
    for (std::size_t k = 0; k < schedule.size(); ++k)
      if (schedule[k] == eps) return k;
    throw ArgumentError("scale " + std::to_string(eps) + " is not in the zoom schedule");
  }
  bool has_scale(double eps) const {
    return std::find(schedule.begin(), schedule.end(), eps) != schedule.end();
  }
  const Relation& at(double eps) const { return relations[index_of(eps)]; }
};

namespace detail {
inline SpacePtr point_space(const std::vector<ZPoint>& pts, const ZDistance& dist) {
  return make_space(FiniteMetricSpace::from_points(std::span<const ZPoint>(pts), dist));
}

inline Relation rescaled_source(const Relation& rho, double factor) {
  return rho.with_spaces(make_space(rescale(rho.src_space(), factor)), rho.dst_ptr());
}
}  // namespace detail

inline ZoomSequence build_zoom(const ZStructure& s, const ZPoint& x, const TangentProvider& provider,
                               std::vector<double> schedule, const TemplateOptions& opt = {}) {
  if (!provider) throw DependencyError("build_zoom: no tangent distance; run check_A3 first");
  if (schedule.empty()) throw ArgumentError("build_zoom: empty schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k] > 0.0 && schedule[k] <= 1.0)) throw ArgumentError("build_zoom: scales must lie in (0,1]");
    if (k > 0 && !(schedule[k] < schedule[k - 1])) throw ArgumentError("build_zoom: schedule must be decreasing");
  }
  ZoomSequence z{s, x, provider(x), provider, opt, {}, {}, std::move(schedule), {}, {}, {}};
  z.tmpl = make_template(s, x, z.tangent, opt);
  if (z.tmpl.points.size() < 20) throw ArgumentError("build_zoom: template has fewer than 20 points");
  z.pixels = detail::point_space(z.tmpl.points, z.tangent);
  const std::size_t n = z.tmpl.points.size();
  std::vector<Pair> diag(n);
  for (std::size_t j = 0; j < n; ++j) diag[j] = {PointId{j}, PointId{j}};
  const auto d = s.distance_fn();
  for (double eps : z.schedule) {
    std::vector<ZPoint> terr(n);
    for (std::size_t j = 0; j < n; ++j) terr[j] = s.dilate(x, eps, z.tmpl.points[j]);
    Relation rho(detail::point_space(terr, d), z.pixels, diag);
    z.modulus.push_back(accuracy(detail::rescaled_source(rho, 1.0 / eps)));
    z.territory.push_back(std::move(terr));
    z.relations.push_back(std::move(rho));
  }
  return z;
}

struct ZoomQuality {
  MapQuality quality;          // against ((1/eps) d, D)
  double raw_resolution = 0.0; // resolution in the unscaled territory distance
};

inline ZoomQuality zoom_quality(const ZoomSequence& z, double eps) {
  const Relation& rho = z.at(eps);
  ZoomQuality q;
  q.quality = map_quality(detail::rescaled_source(rho, 1.0 / eps));
  q.raw_resolution = eps * q.quality.resolution;
  return q;
}

// ---------------------------------------------------- composite maps

struct Composite {
  Relation relation;        // pixels -> pixels; read the source with (1/mu) D
  SpacePtr witnesses;       // sampled inner ball, raw d
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (index at eps, index at eps*mu)
  bool empty = false;
};

/// rho^x_{eps,mu}: pixels (u', u'') sharing a witness u in both territories.
inline Composite composite_map(const ZoomSequence& z, double eps, double mu) {
  if (!(mu > 0.0 && mu < 1.0)) throw ArgumentError("composite_map: mu must lie in (0,1)");
  const std::size_t k0 = z.index_of(eps);
  const std::size_t k1 = z.index_of(eps * mu);
  auto matches = match_points(z.territory[k0], z.territory[k1], z.x);
  std::vector<ZPoint> w;
  std::vector<Pair> outer, inner;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    w.push_back(z.territory[k0][matches[i].first]);
    outer.push_back({PointId{i}, PointId{matches[i].first}});
    inner.push_back({PointId{i}, PointId{matches[i].second}});
  }
  if (w.empty()) {
    return {Relation(z.pixels, z.pixels, {}), make_space(FiniteMetricSpace()), {}, true};
  }
  SpacePtr W = detail::point_space(w, z.structure.distance_fn());
  Relation a(W, z.pixels, outer), b(W, z.pixels, inner);
  return {compose(inverse(a), b), W, std::move(matches), false};
}

/// Accuracy of a pixel-to-pixel relation against ((1/mu) D, D).
inline double composite_accuracy(const Relation& c, double mu) {
  if (c.empty()) return std::numeric_limits<double>::infinity();
  return accuracy(detail::rescaled_source(c, 1.0 / mu));
}

struct CascadeRow {
  double eps = 0.0;
  double measured = 0.0;
  double bound = 0.0;  // (1/mu) F(eps) + F(eps mu)
  bool holds = false;
};

struct CascadeReport {
  double mu = 0.0;
  std::vector<CascadeRow> rows;
  bool all_hold = true;
  bool bound_shrinks_as_eps_decreases = true;  // fixed mu
  std::vector<std::pair<double, double>> bound_vs_mu;  // fixed eps = first row, mu = 2^-k
  bool bound_grows_as_mu_decreases = true;
};

inline CascadeReport cascade_check(const ZoomSequence& z, const std::vector<double>& eps_list, double mu) {
  CascadeReport r;
  r.mu = mu;
  for (double eps : eps_list) {
    if (!z.has_scale(eps) || !z.has_scale(eps * mu)) continue;
    const auto c = composite_map(z, eps, mu);
    CascadeRow row;
    row.eps = eps;
    row.measured = composite_accuracy(c.relation, mu);
    row.bound = z.modulus[z.index_of(eps)] / mu + z.modulus[z.index_of(eps * mu)];
    row.holds = row.measured <= row.bound + 1e-9;
    r.all_hold = r.all_hold && row.holds;
    if (!r.rows.empty() && row.bound > r.rows.back().bound) r.bound_shrinks_as_eps_decreases = false;
    r.rows.push_back(row);
  }
  if (r.rows.empty()) throw ArgumentError("cascade_check: no scale pair (eps, eps*mu) in the schedule");
  const double e0 = r.rows.front().eps;
  for (double m = 0.5; z.has_scale(e0 * m); m *= 0.5) {
    r.bound_vs_mu.emplace_back(m, z.modulus[z.index_of(e0)] / m + z.modulus[z.index_of(e0 * m)]);
    if (r.bound_vs_mu.size() > 1 && r.bound_vs_mu.back().second < r.bound_vs_mu[r.bound_vs_mu.size() - 2].second)
      r.bound_grows_as_mu_decreases = false;
  }
  return r;
}

// ---------------------------------------------------- Hausdorff in D_mu

struct HausdorffResult {
  double value = 0.0;
  bool empty = false;  // one side empty; value is +inf
};

/// Symmetric Hausdorff distance between the pair sets of r1 and r2 under
/// D_mu((a',a''),(b',b'')) = (1/mu) d_src(a',b') + d_dst(a'',b'').
inline HausdorffResult hausdorff_Dmu(const Relation& r1, const Relation& r2, double mu) {
  if (!(mu > 0.0)) throw ArgumentError("hausdorff_Dmu: mu must be positive");
  if (!same_space(r1.src_ptr(), r2.src_ptr()) || !same_space(r1.dst_ptr(), r2.dst_ptr()))
    throw ArgumentError("hausdorff_Dmu: relations live over different spaces");
  if (r1.empty() || r2.empty()) return {std::numeric_limits<double>::infinity(), true};
  const auto& S = r1.src_space();
  const auto& T = r1.dst_space();
  auto directed = [&](const Relation& a, const Relation& b) {
    const auto& pa = a.pairs();
    const auto& pb = b.pairs();
    return parallel_max(pa.size(), [&](std::size_t i) {
      double best = std::numeric_limits<double>::infinity();
      for (const Pair& q : pb) best = std::min(best, S(pa[i].src, q.src) / mu + T(pa[i].dst, q.dst));
      return best;
    });
  };
  return {std::max(directed(r1, r2), directed(r2, r1)), false};
}

// ---------------------------------------------------- scale stability

struct StabilityReport {
  double mu = 0.0;
  std::vector<double> schedule;       // rows: eps with eps*mu also sampled
  Relation limit;                     // estimate of rhobar^x_mu (finest composite)
  std::vector<double> modulus_table;  // Hausdorff D_mu distance to the limit
  ConvergenceEstimate modulus;
  double self_similarity_limit = 0.0;  // max |D(u'',v'') - (1/mu) D(u',v')| on the limit
  std::vector<double> self_similarity_table;  // same with D replaced by the eps-rescaled distance
  std::optional<ConvergenceEstimate> self_similarity;
  double self_similarity_bound = 0.0;
  bool self_similar = false;
  bool empty_flag = false;
};

namespace detail {
inline double self_similarity(const Relation& c, double mu, const std::function<double(PointId, PointId)>& D) {
  const auto& ps = c.pairs();
  return parallel_max(ps.size(), [&](std::size_t a) {
    double best = 0.0;
    for (std::size_t b = a + 1; b < ps.size(); ++b)
      best = std::max(best, std::abs(D(ps[a].dst, ps[b].dst) - D(ps[a].src, ps[b].src) / mu));
    return best;
  });
}
}  // namespace detail

inline StabilityReport scale_stability(const ZoomSequence& z, double mu, double noise_floor = 1e-12) {
  StabilityReport r{mu, {}, Relation(z.pixels, z.pixels, {}), {}, {}, 0.0, {}, std::nullopt, 0.0, false, false};
  std::vector<Relation> comps;
  for (double eps : z.schedule) {
    if (!z.has_scale(eps * mu)) continue;
    auto c = composite_map(z, eps, mu);
    r.empty_flag = r.empty_flag || c.empty;
    r.schedule.push_back(eps);
    comps.push_back(std::move(c.relation));
  }
  if (comps.empty()) throw ArgumentError("scale_stability: no scale pair (eps, eps*mu) in the schedule");
  r.limit = comps.back();
  for (const auto& c : comps) r.modulus_table.push_back(hausdorff_Dmu(c, r.limit, mu).value);
  if (comps.size() >= 2 && !r.empty_flag) r.modulus = estimate_convergence(r.schedule, r.modulus_table, noise_floor);

  const auto& Y = *z.pixels;
  r.self_similarity_limit = detail::self_similarity(r.limit, mu, [&](PointId a, PointId b) { return Y(a, b); });
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const double eps = r.schedule[k];
    const auto& t = z.tmpl.points;
    r.self_similarity_table.push_back(detail::self_similarity(comps[k], mu, [&](PointId a, PointId b) {
      return rescaled_distance(z.structure, z.x, eps, t[a.index], t[b.index]);
    }));
  }
  if (comps.size() >= 2)
    r.self_similarity = estimate_convergence(r.schedule, r.self_similarity_table, noise_floor);
  const double finest_modulus = r.modulus_table.back();
  r.self_similarity_bound = 3.0 * finest_modulus + z.modulus.back();
  r.self_similar = r.self_similarity_limit <= r.self_similarity_bound + noise_floor;
  return r;
}

// --------------------------------------------------- viewpoint stability

struct ViewpointRow {
  double eps = 0.0;
  Relation difference;  // pixels of x -> pixels of x1
  std::size_t witnesses = 0;
};

struct ViewpointReport {
  std::size_t u_prime = 0;
  std::vector<ViewpointRow> rows;
  std::vector<double> modulus_table;
  std::optional<ConvergenceEstimate> modulus;
  double isometry_residual = 0.0;  // max |D(v'',w'') - D(v',w')| on the limit
  bool empty_flag = false;
};

/// Delta^x_eps(u', .): pairs (v', v'') with a shared witness v,
/// (v, v') in rho^x_eps and (v, v'') in rho^{x1}_eps, x1 = delta^x_eps u'.
/// The x1 sequence is built from the same template recipe at x1.
inline ViewpointRow viewpoint_difference(const ZoomSequence& z, double eps, std::size_t u_prime,
                                         SpacePtr* x1_pixels = nullptr) {
  const std::size_t k = z.index_of(eps);
  if (u_prime >= z.tmpl.points.size()) throw ArgumentError("viewpoint: pixel index out of range");
  const ZPoint x1 = z.territory[k][u_prime];
  const ZoomSequence z1 = build_zoom(z.structure, x1, z.provider, {eps}, z.template_options);
  if (x1_pixels) *x1_pixels = z1.pixels;
  const auto matches = match_points(z.territory[k], z1.territory[0], z.x);
  std::vector<Pair> pairs;
  for (const auto& [i, j] : matches) pairs.push_back({PointId{i}, PointId{j}});
  ViewpointRow row{eps, Relation(z.pixels, z1.pixels, std::move(pairs)), matches.size()};
  return row;
}

inline ViewpointReport viewpoint_stability(const ZoomSequence& z, std::size_t u_prime, double noise_floor = 1e-12) {
  ViewpointReport r;
  r.u_prime = u_prime;
  SpacePtr last_pixels;
  for (double eps : z.schedule) {
    auto row = viewpoint_difference(z, eps, u_prime, &last_pixels);
    if (row.difference.empty()) throw ArgumentError("viewpoint: no shared witnesses at scale " + std::to_string(eps));
    r.rows.push_back(std::move(row));
  }
  const Relation& limit = r.rows.back().difference;
  for (const auto& row : r.rows) {
    // Pixel j of every x1 template is offset(x1, w_j) for the same w_j, so
    // rows are compared on the limit's pixel spaces.
    const bool same_shape = row.difference.dst_space().size() == limit.dst_space().size();
    const auto h = same_shape
                       ? hausdorff_Dmu(row.difference.with_spaces(limit.src_ptr(), limit.dst_ptr()), limit, 1.0)
                       : HausdorffResult{std::numeric_limits<double>::infinity(), true};
    r.empty_flag = r.empty_flag || h.empty;
    r.modulus_table.push_back(h.value);
  }
  if (r.rows.size() >= 2 && !r.empty_flag) {
    std::vector<double> sched;
    for (const auto& row : r.rows) sched.push_back(row.eps);
    r.modulus = estimate_convergence(sched, r.modulus_table, noise_floor);
  }
  const auto& ps = limit.pairs();
  const auto& A = limit.src_space();
  const auto& B = limit.dst_space();
  r.isometry_residual = parallel_max(ps.size(), [&](std::size_t a) {
    double best = 0.0;
    for (std::size_t b = a + 1; b < ps.size(); ++b)
      best = std::max(best, std::abs(B(ps[a].dst, ps[b].dst) - A(ps[a].src, ps[b].src)));
    return best;
  });
  return r;
}

// ------------------------------------------------------------- foveal

struct FovealRow {
  double eps = 0.0;
  Relation phi;                  // territory(eps) -> pixels
  std::vector<char> inner;       // per territory point: in the sampled inner ball
  double restricted_accuracy = 0.0;
  double inner_bound = 0.0;        // mu F(eps mu) + 2 mu cover
  bool inner_holds = false;
  double modulus = 0.0;          // accuracy of phi against ((1/eps) d, D)
  double modulus_bound = 0.0;     // F(eps) + mu F_mu(eps) + 2 cover
  bool modulus_holds = false;
  bool outer_identical = false;  // outer pairs coincide with rho^x_eps
  bool identical_to_source = false;
  std::size_t uncovered = 0;     // inner points whose pixel has no preimage under rhobar
};

struct FovealSequence {
  double mu = 0.0;
  std::vector<FovealRow> rows;
  bool multivalued_fallback = false;
  Relation rhobar;  // the limit relation used
};

inline FovealSequence foveal(const ZoomSequence& z, const StabilityReport& stab) {
  const double mu = stab.mu;
  if (stab.limit.empty()) throw DependencyError("foveal: scale_stability produced no limit relation");
  FovealSequence fs{mu, {}, false, stab.limit};
  // preimages of each pixel under rhobar; single-valuedness checked both ways
  std::vector<std::vector<PointId>> pre(z.pixels->size());
  std::vector<std::size_t> out_degree(z.pixels->size(), 0);
  for (const Pair& p : stab.limit.pairs()) {
    pre[p.dst.index].push_back(p.src);
    ++out_degree[p.src.index];
  }
  for (std::size_t k = 0; k < stab.schedule.size(); ++k) {
    const double eps = stab.schedule[k];
    const std::size_t k0 = z.index_of(eps);
    const auto c = composite_map(z, eps, mu);
    const Relation& rho = z.relations[k0];
    FovealRow row{eps, Relation(rho.src_ptr(), z.pixels, {}), std::vector<char>(z.territory[k0].size(), 0)};
    std::vector<Pair> pairs;
    for (const auto& [i, j] : c.matches) {
      row.inner[i] = 1;
      const auto& ups = pre[j];  // (u, u''=j) in rho_{eps mu}; need rhobar(u') = j
      if (ups.empty()) ++row.uncovered;
      if (ups.size() > 1) fs.multivalued_fallback = true;
      for (PointId up : ups) {
        if (out_degree[up.index] > 1) fs.multivalued_fallback = true;
        pairs.push_back({PointId{i}, up});
      }
    }
    for (const Pair& p : rho.pairs())
      if (!row.inner[p.src.index]) pairs.push_back(p);
    row.phi = Relation(rho.src_ptr(), z.pixels, std::move(pairs));

    std::vector<Pair> outer_phi, outer_rho, inner_phi;
    for (const Pair& p : row.phi.pairs()) (row.inner[p.src.index] ? inner_phi : outer_phi).push_back(p);
    for (const Pair& p : rho.pairs())
      if (!row.inner[p.src.index]) outer_rho.push_back(p);
    row.outer_identical = outer_phi == outer_rho;
    row.identical_to_source = row.phi == rho;

    const double cover = z.tmpl.cover;
    const double F_eps = z.modulus[k0];
    const double F_epsmu = z.modulus[z.index_of(eps * mu)];
    const Relation inner_rel(rho.src_ptr(), z.pixels, inner_phi);
    row.restricted_accuracy = inner_rel.empty() ? 0.0 : accuracy(detail::rescaled_source(inner_rel, 1.0 / eps));
    row.inner_bound = mu * F_epsmu + 2.0 * mu * cover;
    row.inner_holds = row.restricted_accuracy <= row.inner_bound + 1e-12;
    row.modulus = row.phi.empty() ? 0.0 : accuracy(detail::rescaled_source(row.phi, 1.0 / eps));
    row.modulus_bound = F_eps + mu * stab.modulus_table[k] + 2.0 * cover;
    row.modulus_holds = row.modulus <= row.modulus_bound + 1e-12;
    fs.rows.push_back(std::move(row));
  }
  return fs;
}

struct FixedPointRow {
  double eps = 0.0;
  double distance = 0.0;  // Hausdorff D_mu between rhobar o phi and rho_{eps mu}
  bool empty = false;
};

/// rhobar o phi_eps against rho^x_{eps mu}, both restricted to the sampled
/// inner ball and read over territory(eps) with the (1/eps)-rescaled distance.
inline std::vector<FixedPointRow> foveal_fixedpoint_check(const ZoomSequence& z, const FovealSequence& fs) {
  std::vector<FixedPointRow> out;
  for (const auto& row : fs.rows) {
    const std::size_t k0 = z.index_of(row.eps);
    const auto c = composite_map(z, row.eps, fs.mu);
    SpacePtr src = make_space(rescale(z.relations[k0].src_space(), 1.0 / row.eps));
    std::vector<Pair> inner_phi;
    for (const Pair& p : row.phi.pairs())
      if (row.inner[p.src.index]) inner_phi.push_back(p);
    const Relation lhs = compose(Relation(src, z.pixels, inner_phi), fs.rhobar);
    std::vector<Pair> target;
    for (const auto& [i, j] : c.matches) target.push_back({PointId{i}, PointId{j}});
    const Relation rhs(src, z.pixels, std::move(target));
    const auto h = hausdorff_Dmu(lhs, rhs, fs.mu);
    out.push_back({row.eps, h.value, h.empty});
  }
  return out;
}

}  // namespace mc

#endif  // MC_ZOOM_ATLAS_HPP
