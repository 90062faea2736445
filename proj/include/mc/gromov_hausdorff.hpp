#ifndef MC_GROMOV_HAUSDORFF_HPP
#define MC_GROMOV_HAUSDORFF_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "metric_core.hpp"
#include "relation_maps.hpp"

// Gromov-Hausdorff distance as the smallest accuracy of a correspondence
// (a relation with full domain and full image). No 1/2 factor is applied; the
// classical value is half of what these functions return.

namespace mc {

/// Result of a GH computation. The witness is a correspondence attaining
/// `value`. When exact is false, `value` is the best correspondence found and
/// [lower_bound, upper_bound] brackets the true distance.
struct GhResult {
  double value = 0.0;
  Relation witness;
  bool exact = false;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  std::uint64_t nodes_explored = 0;
};

/// dom rho = X, im rho = Y and acc(rho) <= mu.
inline bool is_admissible(const Relation& rho, double mu) {
  if (!rho.is_correspondence()) return false;
  return accuracy(rho) <= mu;
}

namespace detail {

/// Hausdorff distance between two finite sets of reals.
inline double hausdorff_reals(const std::vector<double>& a, const std::vector<double>& b) {
  auto one_side = [](const std::vector<double>& p, const std::vector<double>& q) {
    double worst = 0.0;
    for (double v : p) {
      double best = std::numeric_limits<double>::infinity();
      for (double w : q) best = std::min(best, std::abs(v - w));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_side(a, b), one_side(b, a));
}

inline std::vector<double> row(const FiniteMetricSpace& s, std::size_t i) {
  std::vector<double> r(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) r[j] = s.at(i, j);
  return r;
}

/// Hausdorff distance between the distance profiles of x in X and y in Y.
/// For any correspondence containing (x,y) this is at most its accuracy.
inline std::vector<std::vector<double>> profile_gaps(const FiniteMetricSpace& X,
                                                     const FiniteMetricSpace& Y) {
  std::vector<std::vector<double>> gap(X.size(), std::vector<double>(Y.size()));
  for (std::size_t x = 0; x < X.size(); ++x) {
    const auto rx = row(X, x);
    for (std::size_t y = 0; y < Y.size(); ++y) gap[x][y] = hausdorff_reals(rx, row(Y, y));
  }
  return gap;
}

inline double pairs_accuracy(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                             const std::vector<Pair>& ps) {
  double best = 0.0;
  for (std::size_t a = 0; a < ps.size(); ++a)
    for (std::size_t b = a + 1; b < ps.size(); ++b)
      best = std::max(best, std::abs(Y(ps[a].dst, ps[b].dst) - X(ps[a].src, ps[b].src)));
  return best;
}

inline void require_nonempty(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  if (X.empty() || Y.empty()) throw ArgumentError("Gromov-Hausdorff: empty space");
}

inline Relation transpose_witness(const Relation& w, const SpacePtr& X, const SpacePtr& Y) {
  std::vector<Pair> t;
  for (const Pair& p : w.pairs()) t.push_back({p.dst, p.src});
  return Relation(X, Y, std::move(t));
}

}  // namespace detail

/// Valid lower bound for the smallest correspondence accuracy: the largest of
/// |diam X - diam Y|, the Hausdorff distance between the sets of distance
/// values, and the distance-profile bound max_x min_y (and symmetric).
inline double gh_lower_bound(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  detail::require_nonempty(X, Y);
  double bound = std::abs(X.diameter() - Y.diameter());

  auto values = [](const FiniteMetricSpace& S) {
    std::vector<double> v;
    for (std::size_t i = 0; i < S.size(); ++i)
      for (std::size_t j = i; j < S.size(); ++j) v.push_back(S.at(i, j));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  bound = std::max(bound, detail::hausdorff_reals(values(X), values(Y)));

  const auto gap = detail::profile_gaps(X, Y);
  for (std::size_t x = 0; x < X.size(); ++x)
    bound = std::max(bound, *std::min_element(gap[x].begin(), gap[x].end()));
  for (std::size_t y = 0; y < Y.size(); ++y) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < X.size(); ++x) best = std::min(best, gap[x][y]);
    bound = std::max(bound, best);
  }
  return bound;
}

/// Heuristic correspondence: greedy distance-profile matching (plus a greedy
/// bijection when |X| = |Y|), then local search over single reassignments and
/// 2-swaps, accepting strict improvements only. `history`, when given,
/// receives the accuracy after every accepted move.
inline GhResult gh_upper_bound(const SpacePtr& Xp, const SpacePtr& Yp,
                               std::vector<double>* history = nullptr) {
  const auto& X = *Xp;
  const auto& Y = *Yp;
  detail::require_nonempty(X, Y);
  const std::size_t n = X.size(), m = Y.size();
  const auto gap = detail::profile_gaps(X, Y);

  // f: X -> Y and g: Y -> X; the correspondence is graph(f) union graph(g)^T.
  struct State {
    std::vector<std::size_t> f, g;
  };
  auto pairs_of = [&](const State& s) {
    std::vector<Pair> ps;
    for (std::size_t x = 0; x < n; ++x) ps.push_back({PointId{x}, PointId{s.f[x]}});
    for (std::size_t y = 0; y < m; ++y) ps.push_back({PointId{s.g[y]}, PointId{y}});
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return ps;
  };
  auto cost = [&](const State& s) { return detail::pairs_accuracy(X, Y, pairs_of(s)); };

  auto argmin_row = [&](std::size_t x) {
    std::size_t best = 0;
    for (std::size_t y = 1; y < m; ++y)
      if (gap[x][y] < gap[x][best]) best = y;
    return best;
  };
  auto argmin_col = [&](std::size_t y) {
    std::size_t best = 0;
    for (std::size_t x = 1; x < n; ++x)
      if (gap[x][y] < gap[best][y]) best = x;
    return best;
  };

  std::vector<State> starts;
  {
    State s{std::vector<std::size_t>(n), std::vector<std::size_t>(m)};
    for (std::size_t x = 0; x < n; ++x) s.f[x] = argmin_row(x);
    for (std::size_t y = 0; y < m; ++y) s.g[y] = argmin_col(y);
    starts.push_back(std::move(s));
  }
  if (n == m) {
    // Greedy bijection: each x in order takes its closest unused y; ties to
    // the lowest index, so identical spaces get the identity.
    State s{std::vector<std::size_t>(n), std::vector<std::size_t>(m)};
    std::vector<bool> used(m, false);
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t pick = m;
      for (std::size_t y = 0; y < m; ++y)
        if (!used[y] && (pick == m || gap[x][y] < gap[x][pick])) pick = y;
      used[pick] = true;
      s.f[x] = pick;
      s.g[pick] = x;
    }
    starts.push_back(std::move(s));
  }

  State best_state = starts.front();
  double best_cost = std::numeric_limits<double>::infinity();
  for (State s : starts) {
    double c = cost(s);
    if (history) history->push_back(c);
    bool improved = true;
    while (improved) {
      improved = false;
      auto try_move = [&](State cand) {
        const double cc = cost(cand);
        if (cc < c) {
          s = std::move(cand);
          c = cc;
          improved = true;
          if (history) history->push_back(c);
        }
      };
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < m; ++y)
          if (s.f[x] != y) {
            State cand = s;
            cand.f[x] = y;
            try_move(std::move(cand));
          }
      for (std::size_t y = 0; y < m; ++y)
        for (std::size_t x = 0; x < n; ++x)
          if (s.g[y] != x) {
            State cand = s;
            cand.g[y] = x;
            try_move(std::move(cand));
          }
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          if (s.f[a] != s.f[b]) {
            State cand = s;
            std::swap(cand.f[a], cand.f[b]);
            try_move(std::move(cand));
          }
    }
    if (c < best_cost) {
      best_cost = c;
      best_state = s;
    }
  }

  GhResult r{best_cost, Relation(Xp, Yp, pairs_of(best_state)), false,
             gh_lower_bound(X, Y), best_cost, 0};
  return r;
}

/// Exhaustive minimum of acc over all subsets of X x Y with full projections.
/// Independent of the branch-and-bound; restricted to |X|*|Y| <= 16.
inline double gh_oracle(const FiniteMetricSpace& X, const FiniteMetricSpace& Y) {
  detail::require_nonempty(X, Y);
  const std::size_t n = X.size(), m = Y.size(), cells = n * m;
  if (cells > 16) throw ArgumentError("gh_oracle: |X|*|Y| must be at most 16");
  std::vector<double> dis(cells * cells);
  for (std::size_t a = 0; a < cells; ++a)
    for (std::size_t b = 0; b < cells; ++b)
      dis[a * cells + b] = std::abs(Y.at(a % m, b % m) - X.at(a / m, b / m));
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << cells); ++mask) {
    std::uint32_t rows = 0, cols = 0;
    for (std::size_t c = 0; c < cells; ++c)
      if (mask >> c & 1u) {
        rows |= 1u << (c / m);
        cols |= 1u << (c % m);
      }
    if (rows != (1u << n) - 1 || cols != (1u << m) - 1) continue;
    double acc = 0.0;
    for (std::size_t a = 0; a < cells && acc < best; ++a) {
      if (!(mask >> a & 1u)) continue;
      for (std::size_t b = a + 1; b < cells; ++b)
        if (mask >> b & 1u) acc = std::max(acc, dis[a * cells + b]);
    }
    best = std::min(best, acc);
  }
  return best;
}

/// Exact GH value by branch-and-bound. Points of X (the larger side after an
/// internal transposition) are visited by decreasing eccentricity; each gets
/// a nonempty set of pixels, candidates ordered by increasing distortion
/// against the partial assignment. A node is pruned when its distortion, or
/// the cheapest single-pixel completion of any unassigned point, reaches the
/// incumbent. Leaves that do not cover Y are discarded. The incumbent is
/// seeded by gh_upper_bound. Each accepted candidate counts as one node; if
/// `node_budget` runs out the result is returned with exact = false.
inline GhResult gh_exact(const SpacePtr& Xp, const SpacePtr& Yp, std::uint64_t node_budget = 1'000'000) {
  detail::require_nonempty(*Xp, *Yp);
  if (node_budget == 0) throw ArgumentError("gh_exact: node budget must be positive");
  if (Yp->size() > Xp->size()) {
    GhResult r = gh_exact(Yp, Xp, node_budget);
    r.witness = detail::transpose_witness(r.witness, Xp, Yp);
    return r;
  }
  const auto& X = *Xp;
  const auto& Y = *Yp;
  const std::size_t n = X.size(), m = Y.size();
  if (m > 16) throw ArgumentError("gh_exact: the smaller space must have at most 16 points");

  GhResult seed = gh_upper_bound(Xp, Yp);
  double incumbent = seed.value;
  std::vector<Pair> best_pairs = seed.witness.pairs();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> ecc(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ecc[i] = std::max(ecc[i], X.at(i, j));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ecc[a] > ecc[b]; });

  const std::uint32_t full = (m == 32) ? ~0u : ((1u << m) - 1);
  // Diameter of each pixel subset: distortion of the pairs a single point
  // creates among its own pixels.
  std::vector<double> subset_diam(std::size_t{1} << m, 0.0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    double d = 0.0;
    for (std::size_t a = 0; a < m; ++a)
      if (s >> a & 1u)
        for (std::size_t b = a + 1; b < m; ++b)
          if (s >> b & 1u) d = std::max(d, Y.at(a, b));
    subset_diam[s] = d;
  }

  std::vector<std::uint32_t> assigned(n, 0);
  std::uint64_t nodes = 0;
  bool exhausted = false;

  // cost[y] of adding (x, y) against the current partial correspondence.
  auto pixel_costs = [&](std::size_t x, std::size_t depth) {
    std::vector<double> c(m, 0.0);
    for (std::size_t t = 0; t < depth; ++t) {
      const std::size_t xp = order[t];
      const double dx = X.at(x, xp);
      for (std::size_t yp = 0; yp < m; ++yp) {
        if (!(assigned[xp] >> yp & 1u)) continue;
        for (std::size_t y = 0; y < m; ++y) c[y] = std::max(c[y], std::abs(Y.at(y, yp) - dx));
      }
    }
    return c;
  };

  auto search = [&](auto&& self, std::size_t depth, double partial, std::uint32_t covered) -> void {
    if (exhausted) return;
    if (depth == n) {
      if (covered != full) return;
      incumbent = partial;
      best_pairs.clear();
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < m; ++y)
          if (assigned[x] >> y & 1u) best_pairs.push_back({PointId{x}, PointId{y}});
      return;
    }
    const std::size_t x = order[depth];
    const auto c = pixel_costs(x, depth);
    std::vector<std::pair<double, std::uint32_t>> cands;
    for (std::uint32_t s = 1; s <= full; ++s) {
      if (depth + 1 == n && (covered | s) != full) continue;
      double cost = subset_diam[s];
      for (std::size_t y = 0; y < m; ++y)
        if (s >> y & 1u) cost = std::max(cost, c[y]);
      cost = std::max(cost, partial);
      if (cost < incumbent) cands.emplace_back(cost, s);
      if (s == full) break;
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [cost, s] : cands) {
      if (cost >= incumbent) break;
      if (nodes >= node_budget) {
        exhausted = true;
        return;
      }
      ++nodes;
      assigned[x] = s;
      // Lookahead: every unassigned point needs at least one pixel.
      double look = cost;
      for (std::size_t t = depth + 1; t < n && look < incumbent; ++t) {
        const auto ct = pixel_costs(order[t], depth + 1);
        look = std::max(look, *std::min_element(ct.begin(), ct.end()));
      }
      if (look < incumbent) self(self, depth + 1, cost, covered | s);
      assigned[x] = 0;
      if (exhausted) return;
    }
  };
  search(search, 0, 0.0, 0u);

  GhResult r{incumbent, Relation(Xp, Yp, best_pairs), !exhausted, 0.0, incumbent, nodes};
  r.lower_bound = r.exact ? incumbent : std::min(gh_lower_bound(X, Y), incumbent);
  return r;
}

}  // namespace mc

#endif  // MC_GROMOV_HAUSDORFF_HPP
