#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace mc;
namespace ts = testing_support;

namespace {

FiniteMetricSpace triangle(double a, double b, double c) {
  return FiniteMetricSpace({"p1", "p2", "p3"}, {{0, a, c}, {a, 0, b}, {c, b, 0}});
}

SpacePtr two_points(double d) { return make_space(FiniteMetricSpace({"a", "b"}, {{0, d}, {d, 0}})); }

}  // namespace

// ------------------------------------------------------------- metric core

TEST(MetricCore, EquilateralTriangleIsValid) {
  const auto rep = validate_metric(triangle(1, 1, 1));
  EXPECT_TRUE(rep.ok);
  EXPECT_TRUE(rep.violations.empty());
}

TEST(MetricCore, LongSideReportsTheTripleAndItsSlack) {
  const auto rep = validate_metric(triangle(1, 1, 5));
  ASSERT_FALSE(rep.ok);
  ASSERT_EQ(rep.violations.size(), 1u);
  const auto& v = rep.violations[0];
  EXPECT_EQ(v.kind, ViolationKind::Triangle);
  EXPECT_EQ(v.i.index, 0u);
  EXPECT_EQ(v.j.index, 1u);
  EXPECT_EQ(v.k.index, 2u);
  EXPECT_DOUBLE_EQ(v.slack, 3.0);
}

TEST(MetricCore, DetectsAsymmetryDiagonalAndCoincidentPoints) {
  const FiniteMetricSpace s({"a", "b", "c"}, {{0.5, 1, 1}, {2, 0, 0}, {1, 0, 0}});
  const auto rep = validate_metric(s);
  std::set<ViolationKind> kinds;
  for (const auto& v : rep.violations) kinds.insert(v.kind);
  EXPECT_TRUE(kinds.count(ViolationKind::Diagonal));
  EXPECT_TRUE(kinds.count(ViolationKind::Symmetry));
  EXPECT_TRUE(kinds.count(ViolationKind::Identity));
}

TEST(MetricCore, RandomEuclideanCloudsAlwaysValidate) {
  ts::Rng rng(11);
  for (int t = 0; t < 20; ++t) EXPECT_TRUE(validate_metric(ts::random_euclidean_space(rng, 50)).ok);
}

TEST(MetricCore, ConstructorRejectsMalformedMatrices) {
  EXPECT_THROW(FiniteMetricSpace({"a", "b"}, {{0, 1}}), StructuralError);
  EXPECT_THROW(FiniteMetricSpace({"a", "b"}, {{0, 1}, {1}}), StructuralError);
  EXPECT_THROW(FiniteMetricSpace({"a", "b"}, {{0, -1}, {-1, 0}}), StructuralError);
  EXPECT_THROW(FiniteMetricSpace({"a"}, {{std::nan("")}}), StructuralError);
}

TEST(MetricCore, RescaleMultipliesEveryDistance) {
  ts::Rng rng(3);
  const auto s = ts::random_graph_metric(rng, 6);
  EXPECT_EQ(rescale(s, 1.0), s);
  const auto four = rescale(*two_points(1.0), 4.0);
  EXPECT_EQ(four.at(0, 1), 4.0);
  EXPECT_THROW(rescale(s, 0.0), ArgumentError);
  EXPECT_THROW(rescale(s, -2.0), ArgumentError);
}

TEST(MetricCore, EpsNetExtremes) {
  ts::Rng rng(5);
  const auto s = ts::random_euclidean_space(rng, 15);
  const auto one = eps_net(s, s.diameter());
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].index, 0u);
  EXPECT_EQ(eps_net(s, 1e-9).size(), s.size());
  EXPECT_THROW(eps_net(s, 0.0), ArgumentError);
}

TEST(MetricCore, EpsNetOnUnitGridIsDenseByDefinition) {
  const auto g = ts::grid(10, 1.0 / 9.0);
  const auto net = eps_net(g, 0.25);
  for (std::size_t u = 0; u < g.size(); ++u) {
    bool covered = false;
    for (PointId c : net) covered = covered || g(c, PointId{u}) <= 0.25;
    EXPECT_TRUE(covered) << "grid point " << u;
  }
}

TEST(MetricCore, EpsNetCentersAreDenseAndSeparated) {
  ts::Rng rng(19);
  for (int t = 0; t < 50; ++t) {
    const auto s = ts::random_metric(rng, ts::pick(rng, 2, 25));
    const double eps = ts::uniform(rng, 0.05, 1.5);
    const auto net = eps_net(s, eps);
    EXPECT_LE(covering_radius(net, s), eps);
    for (std::size_t a = 0; a < net.size(); ++a)
      for (std::size_t b = a + 1; b < net.size(); ++b) EXPECT_GT(s(net[a], net[b]), eps);
  }
}

TEST(MetricCore, RestrictKeepsDistancesInTheGivenOrder) {
  ts::Rng rng(2);
  const auto s = ts::random_graph_metric(rng, 7);
  EXPECT_EQ(restrict(s, all_points(s)), s);
  const std::vector<PointId> one{PointId{3}};
  const auto r1 = restrict(s, one);
  EXPECT_EQ(r1.size(), 1u);
  EXPECT_EQ(r1.matrix(), std::vector<std::vector<double>>{{0.0}});
  const std::vector<PointId> rev{PointId{5}, PointId{1}};
  EXPECT_EQ(restrict(s, rev).at(0, 1), s.at(5, 1));
  const std::vector<PointId> dup{PointId{1}, PointId{1}};
  EXPECT_THROW(restrict(s, dup), ArgumentError);
  EXPECT_THROW(restrict(s, std::vector<PointId>{}), ArgumentError);
}

// ---------------------------------------------------------------- relations

TEST(Relations, InverseOfBijectionGraphIsTheInverseFunction) {
  ts::Rng rng(7);
  auto X = make_space(ts::random_metric(rng, 5));
  auto Y = make_space(ts::random_metric(rng, 5));
  const std::vector<std::size_t> f{3, 0, 4, 1, 2};
  std::vector<Pair> g, ginv;
  for (std::size_t i = 0; i < 5; ++i) {
    g.push_back({PointId{i}, PointId{f[i]}});
    ginv.push_back({PointId{f[i]}, PointId{i}});
  }
  const Relation rho(X, Y, g);
  EXPECT_EQ(inverse(rho), Relation(Y, X, ginv));
  EXPECT_EQ(inverse(inverse(rho)), rho);
}

TEST(Relations, ComposeWithIdentityAndEmptyComposite) {
  ts::Rng rng(8);
  auto X = make_space(ts::random_metric(rng, 4));
  auto Y = make_space(ts::random_metric(rng, 5));
  const auto rho = ts::random_relation(rng, X, Y);
  EXPECT_EQ(compose(rho, identity_relation(Y)), rho);
  EXPECT_EQ(compose(identity_relation(X), rho), rho);

  auto Z = make_space(ts::random_metric(rng, 3));
  const Relation r1(X, Y, {{PointId{0}, PointId{0}}});
  const Relation r2(Y, Z, {{PointId{1}, PointId{0}}});
  EXPECT_TRUE(compose(r1, r2).empty());
  EXPECT_THROW(compose(r1, r1), ArgumentError);
}

TEST(Relations, ComposeMatchesWitnessSearch) {
  ts::Rng rng(9);
  for (int t = 0; t < 40; ++t) {
    auto X = make_space(ts::random_metric(rng, ts::pick(rng, 1, 5)));
    auto Y = make_space(ts::random_metric(rng, ts::pick(rng, 1, 5)));
    auto Z = make_space(ts::random_metric(rng, ts::pick(rng, 1, 5)));
    const auto a = ts::random_relation(rng, X, Y, 0.4), b = ts::random_relation(rng, Y, Z, 0.4);
    const auto c = compose(a, b);
    for (std::size_t x = 0; x < X->size(); ++x)
      for (std::size_t z = 0; z < Z->size(); ++z) {
        bool witness = false;
        for (std::size_t y = 0; y < Y->size(); ++y)
          witness = witness || (a.contains({PointId{x}, PointId{y}}) && b.contains({PointId{y}, PointId{z}}));
        EXPECT_EQ(c.contains({PointId{x}, PointId{z}}), witness);
      }
    auto W = make_space(ts::random_metric(rng, 3));
    const auto d = ts::random_relation(rng, Z, W, 0.5);
    EXPECT_EQ(compose(compose(a, b), d), compose(a, compose(b, d)));
  }
}

TEST(Relations, QualityOfIdentityIsZero) {
  ts::Rng rng(1);
  auto X = make_space(ts::random_metric(rng, 6));
  const auto q = map_quality(identity_relation(X));
  EXPECT_EQ(q.accuracy, 0.0);
  EXPECT_EQ(q.resolution, 0.0);
  EXPECT_EQ(q.precision, 0.0);
}

TEST(Relations, QualityOfTwoPointBijection) {
  const Relation rho(two_points(1.0), two_points(3.0), {{PointId{0}, PointId{0}}, {PointId{1}, PointId{1}}});
  const auto q = map_quality(rho);
  EXPECT_EQ(q.accuracy, 2.0);
  EXPECT_EQ(q.resolution, 0.0);
  EXPECT_EQ(q.precision, 0.0);
}

TEST(Relations, QualityOfCollapseOntoOnePixel) {
  auto Y = make_space(FiniteMetricSpace({"y"}, {{0.0}}));
  const Relation rho(two_points(1.0), Y, {{PointId{0}, PointId{0}}, {PointId{1}, PointId{0}}});
  const auto q = map_quality(rho);
  EXPECT_EQ(q.accuracy, 1.0);
  EXPECT_EQ(q.resolution, 1.0);
  EXPECT_EQ(q.precision, 0.0);
  EXPECT_THROW(map_quality(Relation(Y, Y, {})), ArgumentError);
}

TEST(Relations, QualityAgreesWithDefinitionsOnRandomRelations) {
  ts::Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    auto X = make_space(ts::random_metric(rng, ts::pick(rng, 1, 9)));
    auto Y = make_space(ts::random_metric(rng, ts::pick(rng, 1, 9)));
    const auto rho = ts::random_relation(rng, X, Y, ts::uniform(rng, 0.1, 0.7));
    const auto q = map_quality(rho);
    EXPECT_EQ(q.accuracy, ts::oracle_accuracy(*X, *Y, rho.pairs()));
    double res = 0.0, prec = 0.0;
    for (const auto& a : rho.pairs())
      for (const auto& b : rho.pairs()) {
        if (a.dst == b.dst) res = std::max(res, (*X)(a.src, b.src));
        if (a.src == b.src) prec = std::max(prec, (*Y)(a.dst, b.dst));
      }
    EXPECT_EQ(q.resolution, res);
    EXPECT_EQ(q.precision, prec);
    EXPECT_LE(q.resolution, q.accuracy);
    EXPECT_LE(q.precision, q.accuracy);
  }
}

TEST(Relations, DensityPredicate) {
  ts::Rng rng(4);
  const auto s = ts::random_euclidean_space(rng, 12);
  const auto all = all_points(s);
  EXPECT_TRUE(is_dense(all, s, 0.0));
  EXPECT_FALSE(is_dense(std::vector<PointId>{}, s, 10.0));
  for (double eps : {0.1, 0.3, 0.7}) EXPECT_TRUE(is_dense(eps_net(s, eps), s, eps));
  EXPECT_THROW(is_dense(all, s, -1.0), ArgumentError);
}

TEST(Relations, GeneralizeExtremes) {
  ts::Rng rng(6);
  auto X = make_space(ts::random_metric(rng, 5));
  const auto id = identity_relation(X);
  EXPECT_EQ(generalize(id, 0.0, 0.0), id);

  auto Y = make_space(ts::random_metric(rng, 4));
  const Relation one(X, Y, {{PointId{2}, PointId{1}}});
  const auto full = generalize(one, X->diameter(), Y->diameter());
  EXPECT_EQ(full.size(), X->size() * Y->size());
  EXPECT_THROW(generalize(one, 0.0, Y->diameter()), PreconditionError);
  EXPECT_THROW(generalize(one, X->diameter(), 0.0), PreconditionError);
  EXPECT_THROW(generalize(one, -1.0, 0.0), ArgumentError);
}

namespace {

struct RandomInstance {
  Relation rho;
  double eps, mu;
};

RandomInstance random_instance(ts::Rng& rng) {
  auto X = make_space(ts::random_metric(rng, ts::pick(rng, 1, 12)));
  auto Y = make_space(ts::random_metric(rng, ts::pick(rng, 1, 12)));
  auto rho = ts::random_relation(rng, X, Y, ts::uniform(rng, 0.05, 0.5));
  const double eps = covering_radius(rho.domain(), *X) + ts::uniform(rng, 0.0, 1.0);
  const double mu = covering_radius(rho.image(), *Y) + ts::uniform(rng, 0.0, 1.0);
  return {rho, eps, mu};
}

}  // namespace

TEST(Relations, GeneralizeMatchesThickeningDefinition) {
  ts::Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const auto [rho, eps, mu] = random_instance(rng);
    const auto bar = generalize(rho, eps, mu);
    const auto& X = rho.src_space();
    const auto& Y = rho.dst_space();
    for (std::size_t x = 0; x < X.size(); ++x)
      for (std::size_t y = 0; y < Y.size(); ++y) {
        bool near = false;
        for (const auto& p : rho.pairs()) near = near || (X.at(x, p.src.index) <= eps && Y.at(y, p.dst.index) <= mu);
        EXPECT_EQ(bar.contains({PointId{x}, PointId{y}}), near);
      }
    EXPECT_TRUE(bar.is_correspondence());
    for (const auto& p : rho.pairs()) EXPECT_TRUE(bar.contains(p));
  }
}

TEST(Relations, GeneralizationBoundsHoldWithZeroThickening) {
  ts::Rng rng(13);
  auto X = make_space(ts::random_metric(rng, 6));
  auto Y = make_space(ts::random_metric(rng, 6));
  std::vector<Pair> total;
  for (std::size_t i = 0; i < 6; ++i) total.push_back({PointId{i}, PointId{(i * 5) % 6}});
  const Relation rho(X, Y, total);
  const auto rep = check_generalization_bounds(rho, generalize(rho, 0.0, 0.0), 0.0, 0.0);
  for (const auto& c : rep.checks) EXPECT_GE(c.slack, 0.0) << c.name;
  EXPECT_TRUE(rep.all_ok);
}

TEST(Relations, UnconditionalGeneralizationBoundsOnRandomInstances) {
  ts::Rng rng(41);
  for (int t = 0; t < 300; ++t) {
    const auto [rho, eps, mu] = random_instance(rng);
    const auto rep = check_generalization_bounds(rho, generalize(rho, eps, mu), eps, mu);
    for (const char* name : {"a", "b", "c_upper", "d_upper", "e"}) EXPECT_GE(rep[name].slack, -1e-9) << name;
    EXPECT_TRUE(rep.unconditional_ok);
  }
}

TEST(Relations, LowerGeneralizationBoundsOnGridInstances) {
  ts::Rng rng(43);
  for (int t = 0; t < 20; ++t) {
    const auto g = ts::grid_instance(rng);
    const auto rep = check_generalization_bounds(g.rho, generalize(g.rho, g.eps, g.mu), g.eps, g.mu);
    EXPECT_TRUE(rep["c_lower"].holds) << "instance " << t;
    EXPECT_TRUE(rep["d_lower"].holds) << "instance " << t;
    EXPECT_TRUE(rep.all_ok);
  }
}

TEST(Relations, BoundCheckRejectsMismatchedRelations) {
  ts::Rng rng(3);
  auto X = make_space(ts::random_metric(rng, 3));
  const auto id = identity_relation(X);
  const Relation smaller(X, X, {{PointId{0}, PointId{0}}});
  EXPECT_THROW(check_generalization_bounds(id, smaller, 0.0, 0.0), ArgumentError);
  EXPECT_THROW(check_generalization_bounds(id, id, 0.0, 0.0)["nope"], ArgumentError);
}
