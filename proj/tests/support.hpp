// Seeded generators and brute-force oracles shared by the tests and the
// acceptance runner. Nothing here calls the library's own solvers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mc/mc.hpp"

namespace testing_support {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Points in the plane (distinct with probability one); distances are valid by construction.
inline mc::FiniteMetricSpace random_euclidean_space(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<std::vector<double>> p(n, std::vector<double>(2));
  for (auto& q : p) q = {uniform(rng, 0.0, scale), uniform(rng, 0.0, scale)};
  std::vector<std::string> labels;
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("q" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) d[i][j] = std::hypot(p[i][0] - p[j][0], p[i][1] - p[j][1]);
  }
  return mc::FiniteMetricSpace(labels, d);
}

/// Random metric from shortest paths over a random weighted complete graph;
/// this reaches non-Euclidean metrics too.
inline mc::FiniteMetricSpace random_graph_metric(Rng& rng, std::size_t n) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = uniform(rng, 0.2, 3.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("g" + std::to_string(i));
  return mc::FiniteMetricSpace(labels, d);
}

inline mc::FiniteMetricSpace random_metric(Rng& rng, std::size_t n) {
  return (rng() & 1u) ? random_euclidean_space(rng, n, uniform(rng, 0.5, 4.0)) : random_graph_metric(rng, n);
}

/// Random nonempty relation; each possible pair is kept with probability p.
inline mc::Relation random_relation(Rng& rng, const mc::SpacePtr& X, const mc::SpacePtr& Y, double p = 0.3) {
  std::vector<mc::Pair> pairs;
  std::bernoulli_distribution keep(p);
  for (std::size_t i = 0; i < X->size(); ++i)
    for (std::size_t j = 0; j < Y->size(); ++j)
      if (keep(rng)) pairs.push_back({mc::PointId{i}, mc::PointId{j}});
  if (pairs.empty()) pairs.push_back({mc::PointId{pick(rng, 0, X->size() - 1)}, mc::PointId{pick(rng, 0, Y->size() - 1)}});
  return mc::Relation(X, Y, pairs);
}

/// Accuracy straight from the definition, over ordered pairs of pairs.
inline double oracle_accuracy(const mc::FiniteMetricSpace& X, const mc::FiniteMetricSpace& Y,
                              const std::vector<mc::Pair>& ps) {
  double best = 0.0;
  for (const auto& a : ps)
    for (const auto& b : ps) best = std::max(best, std::abs(Y(a.dst, b.dst) - X(a.src, b.src)));
  return best;
}

/// Minimum accuracy over every subset of X x Y projecting onto both factors.
inline double oracle_gh(const mc::FiniteMetricSpace& X, const mc::FiniteMetricSpace& Y) {
  const std::size_t n = X.size(), m = Y.size(), cells = n * m;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << cells); ++mask) {
    std::vector<char> rows(n, 0), cols(m, 0);
    std::vector<mc::Pair> ps;
    for (std::size_t c = 0; c < cells; ++c)
      if (mask >> c & 1u) {
        rows[c / m] = cols[c % m] = 1;
        ps.push_back({mc::PointId{c / m}, mc::PointId{c % m}});
      }
    if (std::count(rows.begin(), rows.end(), 1) != static_cast<long>(n)) continue;
    if (std::count(cols.begin(), cols.end(), 1) != static_cast<long>(m)) continue;
    best = std::min(best, oracle_accuracy(X, Y, ps));
  }
  return best;
}

/// One-dimensional dyadic grid {0, h, ..., (n-1)h} as a metric space.
inline mc::FiniteMetricSpace grid(std::size_t n, double h) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) d[i][j] = h * std::abs(static_cast<double>(i) - static_cast<double>(j));
  }
  return mc::FiniteMetricSpace(labels, d);
}

/// Grid instance whose closed balls contain the boundary witnesses needed by
/// the lower generalization bounds: territory point i goes to the pixels
/// q*floor(i/q) .. q*floor(i/q) + spread of an equally fine grid, and eps, mu
/// are whole multiples of the step, so the closed balls around interior
/// fibers contain points at distance exactly eps (resp. mu).
struct GridInstance {
  mc::Relation rho;
  double eps = 0.0;
  double mu = 0.0;
};

inline GridInstance grid_instance(Rng& rng) {
  const double h = std::ldexp(1.0, -static_cast<int>(pick(rng, 1, 4)));
  const std::size_t q = pick(rng, 1, 3);        // quantization: resolution (q-1)h
  const std::size_t spread = pick(rng, 0, 2);   // precision spread*h
  const std::size_t k = pick(rng, 1, 3);        // eps = k h
  const std::size_t m = pick(rng, 1, 3);        // mu = m h
  const std::size_t margin = k + m + q + spread + 2;
  const std::size_t body = q * pick(rng, 2, 4);
  const std::size_t n = body + 2 * margin;
  auto X = mc::make_space(grid(n, h));
  auto Y = mc::make_space(grid(q * ((n - 1) / q) + spread + 1, h));
  std::vector<mc::Pair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t base = q * (i / q);
    for (std::size_t s = 0; s <= spread; ++s) pairs.push_back({mc::PointId{i}, mc::PointId{base + s}});
  }
  return {mc::Relation(X, Y, pairs), static_cast<double>(k) * h, static_cast<double>(m) * h};
}

}  // namespace testing_support
