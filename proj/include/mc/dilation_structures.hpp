#ifndef MC_DILATION_STRUCTURES_HPP
#define MC_DILATION_STRUCTURES_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace mc {

inline constexpr std::size_t kMaxModelDim = 4;

/// A point of one of the model spaces: Euclidean coordinates, or (a, b, c)
/// for the Heisenberg group. Fixed capacity, value semantics.
template <class Real>
struct ModelPoint {
  std::array<Real, kMaxModelDim> c{};
  std::size_t dim = 0;

  ModelPoint() = default;
  explicit ModelPoint(std::size_t n) : dim(n) {
    if (n > kMaxModelDim) throw ArgumentError("model point dimension too large");
    for (auto& v : c) v = Real(0);
  }
  ModelPoint(std::initializer_list<Real> values) : ModelPoint(values.size()) {
    std::size_t i = 0;
    for (const Real& v : values) c[i++] = v;
  }

  Real& operator[](std::size_t i) { return c[i]; }
  const Real& operator[](std::size_t i) const { return c[i]; }
  std::size_t size() const { return dim; }

  friend ModelPoint operator+(ModelPoint a, const ModelPoint& b) {
    for (std::size_t i = 0; i < a.dim; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend ModelPoint operator-(ModelPoint a, const ModelPoint& b) {
    for (std::size_t i = 0; i < a.dim; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend ModelPoint operator*(const Real& s, ModelPoint a) {
    for (std::size_t i = 0; i < a.dim; ++i) a.c[i] *= s;
    return a;
  }
  friend bool operator==(const ModelPoint& a, const ModelPoint& b) {
    if (a.dim != b.dim) return false;
    for (std::size_t i = 0; i < a.dim; ++i)
      if (a.c[i] != b.c[i]) return false;
    return true;
  }

  template <class Other>
  ModelPoint<Other> cast() const {
    ModelPoint<Other> o(dim);
    for (std::size_t i = 0; i < dim; ++i) o.c[i] = static_cast<Other>(c[i]);
    return o;
  }

  std::vector<double> to_doubles() const {
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = static_cast<double>(c[i]);
    return v;
  }
};

template <class Real>
Real euclidean_norm(const ModelPoint<Real>& p) {
  using std::sqrt;
  Real s(0);
  for (std::size_t i = 0; i < p.dim; ++i) s += p.c[i] * p.c[i];
  return sqrt(s);
}

/// Largest coordinate difference; used to match points that should coincide.
template <class Real>
double coordinate_gap(const ModelPoint<Real>& a, const ModelPoint<Real>& b) {
  double g = 0.0;
  for (std::size_t i = 0; i < a.dim; ++i) {
    const double d = std::abs(static_cast<double>(a.c[i] - b.c[i]));
    g = d > g ? d : g;
  }
  return g;
}

/// The Heisenberg group in exponential coordinates:
///   (a,b,c)(a',b',c') = (a+a', b+b', c+c'+(ab'-a'b)/2),
///   delta_eps(a,b,c) = (eps a, eps b, eps^2 c),
///   |(a,b,c)| = ((a^2+b^2)^2 + 16 c^2)^(1/4)  (Koranyi gauge).
template <class Real>
struct HeisenbergGroup {
  using Point = ModelPoint<Real>;

  static Point identity() { return Point(3); }
  static Point mul(const Point& p, const Point& q) {
    return Point{p[0] + q[0], p[1] + q[1], p[2] + q[2] + (p[0] * q[1] - q[0] * p[1]) / Real(2)};
  }
  static Point inv(const Point& p) { return Point{-p[0], -p[1], -p[2]}; }
  static Point delta(const Real& eps, const Point& p) {
    return Point{eps * p[0], eps * p[1], eps * eps * p[2]};
  }
  static Real gauge(const Point& p) {
    using std::sqrt;
    const Real r2 = p[0] * p[0] + p[1] * p[1];
    // sqrt(sqrt(.)) scales exactly under power-of-two dilations.
    return sqrt(sqrt(r2 * r2 + Real(16) * p[2] * p[2]));
  }
  static Real distance(const Point& u, const Point& v) { return gauge(mul(inv(u), v)); }
};

/// Domain constants of axiom A0: dilations with eps <= 1 act on the closed
/// ball of radius domain_radius, and 1 < a < b.
template <class Real>
struct DomainConstants {
  Real domain_radius = Real(1);
  Real a = Real(2);
  Real b = Real(3);
};

/// A dilation structure over a model space: a distance, dilations
/// delta^x_eps(u) = dilate(x, eps, u), and the chart helpers used for sampling:
/// offset(x, w) places tangent coordinates w at base x (vector addition or
/// left translation), ball_box(r) bounds the coordinates of the r-ball and
/// lattice_step(h) gives a lattice of tangent coordinates closed under the
/// offset law.
template <class Real>
class DilationStructure {
 public:
  using Point = ModelPoint<Real>;
  using DistanceFn = std::function<Real(const Point&, const Point&)>;
  using DilateFn = std::function<Point(const Point&, const Real&, const Point&)>;
  using OffsetFn = std::function<Point(const Point&, const Point&)>;
  using RadiusFn = std::function<Point(const Real&)>;

  DilationStructure(std::string name, std::size_t dim, DistanceFn distance, DilateFn dilate,
                    OffsetFn offset = {}, RadiusFn ball_box = {}, RadiusFn lattice_step = {},
                    DomainConstants<Real> constants = {})
      : name_(std::move(name)),
        dim_(dim),
        distance_(std::move(distance)),
        dilate_(std::move(dilate)),
        offset_(std::move(offset)),
        ball_box_(std::move(ball_box)),
        lattice_step_(std::move(lattice_step)),
        constants_(constants) {
    if (dim_ == 0 || dim_ > kMaxModelDim) throw ArgumentError("structure dimension out of range");
    if (!offset_) offset_ = [](const Point& x, const Point& w) { return x + w; };
    if (!lattice_step_) {
      const std::size_t n = dim_;
      lattice_step_ = [n](const Real& h) {
        Point p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = h;
        return p;
      };
    }
    if (!(Real(1) < constants_.a && constants_.a < constants_.b))
      throw ArgumentError("dilation structure constants must satisfy 1 < A < B");
  }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const DomainConstants<Real>& constants() const { return constants_; }

  Real distance(const Point& u, const Point& v) const { return distance_(u, v); }
  Point dilate(const Point& x, const Real& eps, const Point& u) const { return dilate_(x, eps, u); }
  Point offset(const Point& x, const Point& w) const { return offset_(x, w); }
  bool has_ball_box() const { return static_cast<bool>(ball_box_); }
  Point ball_box(const Real& r) const {
    if (!ball_box_) throw ArgumentError(name_ + ": no coordinate box for ball sampling");
    return ball_box_(r);
  }
  Point lattice_step(const Real& h) const { return lattice_step_(h); }

  bool in_domain(const Point& x, const Point& u) const {
    return distance(x, u) <= constants_.domain_radius;
  }

  const DistanceFn& distance_fn() const { return distance_; }
  const DilateFn& dilate_fn() const { return dilate_; }
  const OffsetFn& offset_fn() const { return offset_; }

 private:
  std::string name_;
  std::size_t dim_;
  DistanceFn distance_;
  DilateFn dilate_;
  OffsetFn offset_;
  RadiusFn ball_box_;
  RadiusFn lattice_step_;
  DomainConstants<Real> constants_;
};

namespace detail {
template <class Real>
ModelPoint<Real> filled(std::size_t n, const Real& v) {
  ModelPoint<Real> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = v;
  return p;
}
}  // namespace detail

/// R^n: |u - v|, x + eps (u - x).
template <class Real>
DilationStructure<Real> euclidean(std::size_t n) {
  using P = ModelPoint<Real>;
  return DilationStructure<Real>(
      "euclid", n, [](const P& u, const P& v) { return euclidean_norm(v - u); },
      [](const P& x, const Real& eps, const P& u) { return x + eps * (u - x); }, {},
      [n](const Real& r) { return detail::filled(n, r); });
}

/// Snowflake of R^n: |u - v|^alpha, x + eps^(1/alpha) (u - x), alpha in (0,1].
template <class Real>
DilationStructure<Real> snowflake(std::size_t n, const Real& alpha) {
  using P = ModelPoint<Real>;
  if (!(alpha > Real(0) && alpha <= Real(1))) throw ArgumentError("snowflake exponent must be in (0,1]");
  return DilationStructure<Real>(
      "snowflake", n,
      [alpha](const P& u, const P& v) {
        using std::pow;
        return Real(pow(euclidean_norm(v - u), alpha));
      },
      [alpha](const P& x, const Real& eps, const P& u) {
        using std::pow;
        return x + Real(pow(eps, Real(1) / alpha)) * (u - x);
      },
      {},
      [n, alpha](const Real& r) {
        using std::pow;
        return detail::filled(n, Real(pow(r, Real(1) / alpha)));
      });
}

/// R^n with ln(1 + |u - v|) and the Euclidean dilations. Its tangent distance
/// is Euclidean, reached at rate O(eps), and it is not linear.
template <class Real>
DilationStructure<Real> log_perturbed(std::size_t n) {
  using P = ModelPoint<Real>;
  return DilationStructure<Real>(
      "logpe", n,
      [](const P& u, const P& v) {
        using std::log;
        return Real(log(Real(1) + euclidean_norm(v - u)));
      },
      [](const P& x, const Real& eps, const P& u) { return x + eps * (u - x); }, {},
      [n](const Real& r) {
        using std::exp;
        return detail::filled(n, Real(exp(r) - Real(1)));
      });
}

/// Heisenberg group with d(x,y) = |x^-1 y| and delta^x_eps u = x delta_eps(x^-1 u).
template <class Real>
DilationStructure<Real> heisenberg() {
  using P = ModelPoint<Real>;
  using H = HeisenbergGroup<Real>;
  return DilationStructure<Real>(
      "heis", 3, [](const P& u, const P& v) { return H::distance(u, v); },
      [](const P& x, const Real& eps, const P& u) { return H::mul(x, H::delta(eps, H::mul(H::inv(x), u))); },
      [](const P& x, const P& w) { return H::mul(x, w); },
      [](const Real& r) { return P{r, r, r * r / Real(4)}; },
      [](const Real& h) { return P{h, h, h * h / Real(2)}; });
}

enum class StructureKind { Euclid, Snowflake, LogPerturbed, Heisenberg };

inline StructureKind parse_structure_kind(const std::string& s) {
  if (s == "euclid") return StructureKind::Euclid;
  if (s == "snowflake") return StructureKind::Snowflake;
  if (s == "logpe") return StructureKind::LogPerturbed;
  if (s == "heis") return StructureKind::Heisenberg;
  throw ArgumentError("unknown structure '" + s + "' (expected euclid|snowflake|logpe|heis)");
}

template <class Real>
DilationStructure<Real> make_structure(StructureKind kind, std::size_t dim = 2, double alpha = 0.5) {
  switch (kind) {
    case StructureKind::Euclid: return euclidean<Real>(dim);
    case StructureKind::Snowflake: return snowflake<Real>(dim, Real(alpha));
    case StructureKind::LogPerturbed: return log_perturbed<Real>(dim);
    case StructureKind::Heisenberg: return heisenberg<Real>();
  }
  throw ArgumentError("unknown structure kind");
}

/// The tangent distance each model is known to have: the structure's own
/// distance for the cone-like models, Euclidean for LogPerturbed.
template <class Real>
typename DilationStructure<Real>::DistanceFn model_tangent_distance(StructureKind kind,
                                                                    std::size_t dim = 2,
                                                                    double alpha = 0.5) {
  if (kind == StructureKind::LogPerturbed) return euclidean<Real>(dim).distance_fn();
  return make_structure<Real>(kind, dim, alpha).distance_fn();
}

/// Uniform rejection sample of `count` points in the closed ball B(x, radius).
template <class Real, class Rng>
std::vector<ModelPoint<Real>> sample_ball(const DilationStructure<Real>& s, const ModelPoint<Real>& x,
                                          double radius, std::size_t count, Rng& rng) {
  const auto box = s.ball_box(Real(radius));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<ModelPoint<Real>> out;
  out.reserve(count);
  while (out.size() < count) {
    ModelPoint<Real> w(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) w[i] = Real(unit(rng)) * box[i];
    ModelPoint<Real> p = s.offset(x, w);
    if (s.distance(x, p) <= Real(radius)) out.push_back(p);
  }
  return out;
}

}  // namespace mc

#endif  // MC_DILATION_STRUCTURES_HPP
