#ifndef MC_RELATION_MAPS_HPP
#define MC_RELATION_MAPS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "metric_core.hpp"
#include "parallel.hpp"

namespace mc {

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

inline SpacePtr make_space(FiniteMetricSpace space) {
  return std::make_shared<const FiniteMetricSpace>(std::move(space));
}

/// (territory point, map pixel)
struct Pair {
  PointId src;
  PointId dst;
  auto operator<=>(const Pair&) const = default;
};

/// A relation rho between two finite metric spaces, used as a map from the
/// source (territory) into the destination (map space). Pairs are kept sorted
/// and unique. An empty relation is representable (composition may produce
/// one) but most quality functionals reject it.
class Relation {
 public:
  Relation(SpacePtr src, SpacePtr dst, std::vector<Pair> pairs)
      : src_(std::move(src)), dst_(std::move(dst)), pairs_(std::move(pairs)) {
    if (!src_ || !dst_) throw ArgumentError("relation needs both spaces");
    for (const Pair& p : pairs_) {
      if (!src_->contains(p.src) || !dst_->contains(p.dst)) {
        throw ArgumentError("relation pair (" + std::to_string(p.src.index) + "," +
                            std::to_string(p.dst.index) + ") out of range");
      }
    }
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    for (const Pair& p : pairs_) {
      domain_.push_back(p.src);
      image_.push_back(p.dst);
    }
    auto uniq = [](std::vector<PointId>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(domain_);
    uniq(image_);
  }

  const std::vector<Pair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const FiniteMetricSpace& src_space() const { return *src_; }
  const FiniteMetricSpace& dst_space() const { return *dst_; }
  const SpacePtr& src_ptr() const { return src_; }
  const SpacePtr& dst_ptr() const { return dst_; }

  /// Projection on the source, sorted.
  const std::vector<PointId>& domain() const { return domain_; }
  /// Projection on the destination, sorted.
  const std::vector<PointId>& image() const { return image_; }

  bool contains(Pair p) const { return std::binary_search(pairs_.begin(), pairs_.end(), p); }

  /// dom rho = X and im rho = Y.
  bool is_correspondence() const {
    return domain_.size() == src_->size() && image_.size() == dst_->size();
  }

  /// Same pairs, reinterpreted over other spaces of the same cardinality
  /// (typically a rescaled copy).
  Relation with_spaces(SpacePtr src, SpacePtr dst) const {
    if (src->size() != src_->size() || dst->size() != dst_->size())
      throw ArgumentError("with_spaces: cardinality mismatch");
    return Relation(std::move(src), std::move(dst), pairs_);
  }

  friend bool operator==(const Relation& a, const Relation& b) { return a.pairs_ == b.pairs_; }

 private:
  SpacePtr src_;
  SpacePtr dst_;
  std::vector<Pair> pairs_;
  std::vector<PointId> domain_;
  std::vector<PointId> image_;
};

inline bool same_space(const SpacePtr& a, const SpacePtr& b) { return a == b || *a == *b; }

/// Transposed relation; spaces swap roles.
inline Relation inverse(const Relation& rho) {
  std::vector<Pair> t;
  t.reserve(rho.size());
  for (const Pair& p : rho.pairs()) t.push_back({p.dst, p.src});
  return Relation(rho.dst_ptr(), rho.src_ptr(), std::move(t));
}

/// Pairs (u, u'') having a witness u' with (u,u') in rho1 and (u',u'') in rho2.
/// The result may be empty.
inline Relation compose(const Relation& rho1, const Relation& rho2) {
  if (!same_space(rho1.dst_ptr(), rho2.src_ptr()))
    throw ArgumentError("compose: destination of the first relation is not the source of the second");
  std::vector<std::vector<PointId>> fiber(rho2.src_space().size());
  for (const Pair& p : rho2.pairs()) fiber[p.src.index].push_back(p.dst);
  std::vector<Pair> out;
  for (const Pair& p : rho1.pairs())
    for (PointId z : fiber[p.dst.index]) out.push_back({p.src, z});
  return Relation(rho1.src_ptr(), rho2.dst_ptr(), std::move(out));
}

/// Identity relation {(x,x)} on a space.
inline Relation identity_relation(const SpacePtr& space) {
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < space->size(); ++i) pairs.push_back({PointId{i}, PointId{i}});
  return Relation(space, space, std::move(pairs));
}

/// Accuracy, resolution and precision of a relation, plus the per-pixel and
/// per-point tables. Sups over the finite pair set are exact maxima; a
/// singleton fiber contributes 0.
struct MapQuality {
  double accuracy = 0.0;
  double resolution = 0.0;
  double precision = 0.0;
  std::vector<std::pair<PointId, double>> resolution_at;  // one entry per image pixel
  std::vector<std::pair<PointId, double>> precision_at;   // one entry per domain point
};

/// Worst distortion |D(y1,y2) - d(x1,x2)| over related pairs.
inline double accuracy(const Relation& rho) {
  const auto& ps = rho.pairs();
  const auto& X = rho.src_space();
  const auto& Y = rho.dst_space();
  return parallel_max(ps.size(), [&](std::size_t a) {
    double best = 0.0;
    for (std::size_t b = a + 1; b < ps.size(); ++b) {
      best = std::max(best, std::abs(Y(ps[a].dst, ps[b].dst) - X(ps[a].src, ps[b].src)));
    }
    return best;
  });
}

inline MapQuality map_quality(const Relation& rho) {
  if (rho.empty()) throw ArgumentError("map_quality: relation has no pairs");
  MapQuality q;
  q.accuracy = accuracy(rho);
  const auto& X = rho.src_space();
  const auto& Y = rho.dst_space();

  // Pairs are sorted by src, so src fibers are contiguous.
  const auto& ps = rho.pairs();
  for (std::size_t a = 0; a < ps.size();) {
    std::size_t b = a;
    while (b < ps.size() && ps[b].src == ps[a].src) ++b;
    double spread = 0.0;
    for (std::size_t i = a; i < b; ++i)
      for (std::size_t j = i + 1; j < b; ++j) spread = std::max(spread, Y(ps[i].dst, ps[j].dst));
    q.precision_at.emplace_back(ps[a].src, spread);
    q.precision = std::max(q.precision, spread);
    a = b;
  }

  std::vector<std::vector<PointId>> fiber(Y.size());
  for (const Pair& p : ps) fiber[p.dst.index].push_back(p.src);
  for (PointId y : rho.image()) {
    const auto& f = fiber[y.index];
    double spread = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = i + 1; j < f.size(); ++j) spread = std::max(spread, X(f[i], f[j]));
    q.resolution_at.emplace_back(y, spread);
    q.resolution = std::max(q.resolution, spread);
  }

  // res(y) is a distortion |D(y,y) - d(x1,x2)|, prec(x) likewise, so both are
  // bounded by the accuracy exactly, not up to rounding.
  if (q.resolution > q.accuracy || q.precision > q.accuracy)
    throw std::logic_error("map_quality: resolution/precision exceed accuracy");
  return q;
}

/// Every point of `space` lies within eps (closed) of some point of `subset`.
inline bool is_dense(std::span<const PointId> subset, const FiniteMetricSpace& space, double eps) {
  if (eps < 0.0) throw ArgumentError("is_dense: eps must be >= 0");
  for (std::size_t u = 0; u < space.size(); ++u) {
    if (!(distance_to_set(space, subset, PointId{u}) <= eps)) return false;
  }
  return true;
}

/// Smallest eps for which `subset` is eps-dense (+inf for an empty subset of a
/// nonempty space).
inline double covering_radius(std::span<const PointId> subset, const FiniteMetricSpace& space) {
  double r = 0.0;
  for (std::size_t u = 0; u < space.size(); ++u)
    r = std::max(r, distance_to_set(space, subset, PointId{u}));
  return r;
}

/// Cartographic generalization: (x,y) is kept when some (x',y') in rho has
/// d(x,x') <= eps and D(y,y') <= mu. Requires dom rho eps-dense in X and
/// im rho mu-dense in Y, so the result has full domain and image.
inline Relation generalize(const Relation& rho, double eps, double mu) {
  if (eps < 0.0 || mu < 0.0) throw ArgumentError("generalize: eps and mu must be >= 0");
  const auto& X = rho.src_space();
  const auto& Y = rho.dst_space();
  for (std::size_t u = 0; u < X.size(); ++u) {
    if (!(distance_to_set(X, rho.domain(), PointId{u}) <= eps))
      throw PreconditionError("generalize: domain is not eps-dense; territory point " +
                              std::to_string(u) + " (" + X.labels()[u] + ") is uncovered");
  }
  for (std::size_t v = 0; v < Y.size(); ++v) {
    if (!(distance_to_set(Y, rho.image(), PointId{v}) <= mu))
      throw PreconditionError("generalize: image is not mu-dense; map pixel " + std::to_string(v) +
                              " (" + Y.labels()[v] + ") is uncovered");
  }
  std::vector<Pair> out;
  for (std::size_t x = 0; x < X.size(); ++x) {
    for (std::size_t y = 0; y < Y.size(); ++y) {
      for (const Pair& p : rho.pairs()) {
        if (X.at(x, p.src.index) <= eps && Y.at(y, p.dst.index) <= mu) {
          out.push_back({PointId{x}, PointId{y}});
          break;
        }
      }
    }
  }
  return Relation(rho.src_ptr(), rho.dst_ptr(), std::move(out));
}

/// One inequality lhs <= rhs of the generalization bounds. slack = rhs - lhs.
struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = true;
  /// Lower bounds whose proof needs points at distance exactly eps (or mu)
  /// from the fiber; these are reported but not expected to hold on arbitrary
  /// finite samples.
  bool witness_dependent = false;
};

struct GeneralizationReport {
  std::vector<BoundCheck> checks;
  /// All inequalities that are not witness-dependent hold.
  bool unconditional_ok = true;
  /// Including the witness-dependent lower bounds.
  bool all_ok = true;

  const BoundCheck& operator[](const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw ArgumentError("no bound named " + name);
  }
};

/// Evaluates the accuracy/resolution/precision bounds relating rho and its
/// generalization rhoBar = generalize(rho, eps, mu). Comparisons use the
/// given absolute tolerance.
inline GeneralizationReport check_generalization_bounds(const Relation& rho, const Relation& rhoBar,
                                                        double eps, double mu,
                                                        double tolerance = 1e-9) {
  if (!same_space(rho.src_ptr(), rhoBar.src_ptr()) || !same_space(rho.dst_ptr(), rhoBar.dst_ptr()))
    throw ArgumentError("check_generalization_bounds: relations live on different spaces");
  for (const Pair& p : rho.pairs())
    if (!rhoBar.contains(p))
      throw ArgumentError("check_generalization_bounds: rhoBar does not contain rho");
  const MapQuality q = map_quality(rho);
  const MapQuality qb = map_quality(rhoBar);
  const double spread = 2.0 * (eps + mu);

  GeneralizationReport r;
  auto add = [&](std::string name, double lhs, double rhs, bool witness) {
    BoundCheck c{std::move(name), lhs, rhs, rhs - lhs, rhs - lhs >= -tolerance, witness};
    if (!c.holds) {
      r.all_ok = false;
      if (!witness) r.unconditional_ok = false;
    }
    r.checks.push_back(std::move(c));
  };
  add("a", q.resolution, q.accuracy, false);
  add("b", q.precision, q.accuracy, false);
  add("c_upper", qb.resolution, q.accuracy + spread, false);
  add("d_upper", qb.precision, q.accuracy + spread, false);
  add("e", std::abs(qb.accuracy - q.accuracy), spread, false);
  add("c_lower", q.resolution + 2.0 * eps, qb.resolution, true);
  add("d_lower", q.precision + 2.0 * mu, qb.precision, true);
  return r;
}

}  // namespace mc

#endif  // MC_RELATION_MAPS_HPP
