#ifndef MC_METRIC_CORE_HPP
#define MC_METRIC_CORE_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace mc {

/// Index of a point inside its owning FiniteMetricSpace.
struct PointId {
  std::size_t index = 0;
  auto operator<=>(const PointId&) const = default;
};

/// A finite set of labelled points with a pairwise distance matrix.
///
/// Construction only checks the structure of the input (square matrix, label
/// count, finite nonnegative entries). The metric axioms are checked by
/// validate_metric(), which reports every violation instead of throwing.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  FiniteMetricSpace(std::vector<std::string> labels, std::vector<std::vector<double>> dist)
      : labels_(std::move(labels)) {
    const std::size_t n = labels_.size();
    if (dist.size() != n) {
      throw StructuralError("distance matrix has " + std::to_string(dist.size()) +
                            " rows but there are " + std::to_string(n) + " labels");
    }
    dist_.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i].size() != n) {
        throw StructuralError("distance matrix row " + std::to_string(i) + " has " +
                              std::to_string(dist[i].size()) + " entries, expected " +
                              std::to_string(n));
      }
      for (std::size_t j = 0; j < n; ++j) {
        const double d = dist[i][j];
        if (!std::isfinite(d) || d < 0.0) {
          throw StructuralError("distance entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") is negative or not finite");
        }
        dist_.push_back(d);
      }
    }
  }

  /// Builds the space from a point list and a distance callable.
  template <class Point, class Distance>
  static FiniteMetricSpace from_points(std::span<const Point> points, Distance&& distance,
                                       std::vector<std::string> labels = {}) {
    const std::size_t n = points.size();
    if (labels.empty()) {
      labels.reserve(n);
      for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    }
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        d[i][j] = d[j][i] = static_cast<double>(distance(points[i], points[j]));
      }
    }
    return FiniteMetricSpace(std::move(labels), std::move(d));
  }

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }

  double operator()(PointId a, PointId b) const { return dist_[a.index * size() + b.index]; }
  double at(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }

  std::vector<std::vector<double>> matrix() const {
    std::vector<std::vector<double>> m(size(), std::vector<double>(size()));
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) m[i][j] = at(i, j);
    return m;
  }

  double max_entry() const {
    return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
  }
  double diameter() const { return max_entry(); }

  bool contains(PointId p) const { return p.index < size(); }

  friend bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    return a.labels_ == b.labels_ && a.dist_ == b.dist_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<double> dist_;  // row-major n*n
};

enum class ViolationKind { Triangle, Symmetry, Diagonal, Identity };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Triangle: return "triangle";
    case ViolationKind::Symmetry: return "symmetry";
    case ViolationKind::Diagonal: return "diagonal";
    case ViolationKind::Identity: return "identity";
  }
  return "?";
}

/// One failed axiom. For triangle violations (i, j, k) means
/// d(i,k) > d(i,j) + d(j,k) and slack is the excess. Symmetry reports (i, j, j)
/// with |d(i,j) - d(j,i)|, diagonal (i, i, i) with d(i,i), identity (i, j, j)
/// for a zero distance between distinct points.
struct Violation {
  ViolationKind kind = ViolationKind::Triangle;
  PointId i, j, k;
  double slack = 0.0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  double tolerance = 0.0;
};

/// Checks symmetry, zero diagonal, positivity and every triangle inequality
/// with tolerance 1e-12 * (largest entry). Triangle triples are listed once,
/// with i < k.
inline ValidationReport validate_metric(const FiniteMetricSpace& space) {
  ValidationReport report;
  const std::size_t n = space.size();
  const double tol = 1e-12 * space.max_entry();
  report.tolerance = tol;
  auto add = [&](ViolationKind kind, std::size_t i, std::size_t j, std::size_t k, double slack) {
    report.violations.push_back({kind, PointId{i}, PointId{j}, PointId{k}, slack});
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (space.at(i, i) > tol) add(ViolationKind::Diagonal, i, i, i, space.at(i, i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double asym = std::abs(space.at(i, j) - space.at(j, i));
      if (asym > tol) add(ViolationKind::Symmetry, i, j, j, asym);
      if (space.at(i, j) <= tol || space.at(j, i) <= tol)
        add(ViolationKind::Identity, i, j, j, std::min(space.at(i, j), space.at(j, i)));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double excess = space.at(i, k) - space.at(i, j) - space.at(j, k);
        if (excess > tol) add(ViolationKind::Triangle, i, j, k, excess);
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

/// Multiplies every distance by `factor`.
inline FiniteMetricSpace rescale(const FiniteMetricSpace& space, double factor) {
  if (!std::isfinite(factor) || factor <= 0.0)
    throw ArgumentError("rescale factor must be positive and finite");
  auto m = space.matrix();
  for (auto& row : m)
    for (auto& d : row) d *= factor;
  return FiniteMetricSpace(space.labels(), std::move(m));
}

/// Distance from `u` to the closest point of `centers` (+inf if empty).
inline double distance_to_set(const FiniteMetricSpace& space, std::span<const PointId> centers,
                              PointId u) {
  double best = std::numeric_limits<double>::infinity();
  for (PointId c : centers) best = std::min(best, space(c, u));
  return best;
}

/// Greedy farthest-point eps-net starting from point 0. Every point of the
/// space ends up within eps (closed) of some returned center. Ties go to the
/// lowest index, so the output is deterministic.
inline std::vector<PointId> eps_net(const FiniteMetricSpace& space, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("eps_net requires eps > 0");
  std::vector<PointId> centers;
  if (space.empty()) return centers;
  const std::size_t n = space.size();
  std::vector<double> gap(n, std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  while (true) {
    centers.push_back(PointId{next});
    for (std::size_t u = 0; u < n; ++u) gap[u] = std::min(gap[u], space.at(next, u));
    std::size_t far = 0;
    for (std::size_t u = 1; u < n; ++u)
      if (gap[u] > gap[far]) far = u;
    if (gap[far] <= eps) break;
    next = far;
  }
  return centers;
}

/// Sub-space on `subset`, in the order given.
inline FiniteMetricSpace restrict(const FiniteMetricSpace& space, std::span<const PointId> subset) {
  if (subset.empty()) throw ArgumentError("restrict: subset must be nonempty");
  std::vector<bool> seen(space.size(), false);
  for (PointId p : subset) {
    if (!space.contains(p))
      throw ArgumentError("restrict: point id " + std::to_string(p.index) + " out of range");
    if (seen[p.index])
      throw ArgumentError("restrict: duplicate point id " + std::to_string(p.index));
    seen[p.index] = true;
  }
  std::vector<std::string> labels;
  std::vector<std::vector<double>> m(subset.size(), std::vector<double>(subset.size()));
  for (std::size_t a = 0; a < subset.size(); ++a) {
    labels.push_back(space.labels()[subset[a].index]);
    for (std::size_t b = 0; b < subset.size(); ++b) m[a][b] = space(subset[a], subset[b]);
  }
  return FiniteMetricSpace(std::move(labels), std::move(m));
}

inline std::vector<PointId> all_points(const FiniteMetricSpace& space) {
  std::vector<PointId> ids(space.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = PointId{i};
  return ids;
}

}  // namespace mc

#endif  // MC_METRIC_CORE_HPP
