#include <gtest/gtest.h>

#include <array>

#include "mc/precision.hpp"
#include "support.hpp"

using namespace mc;
namespace ts = testing_support;
using Q = mc::quad;
using P2 = ModelPoint<double>;
using PQ = ModelPoint<Q>;

namespace {

// Independent Heisenberg arithmetic in long double.
using L3 = std::array<long double, 3>;
L3 lmul(const L3& p, const L3& q) {
  return {p[0] + q[0], p[1] + q[1], p[2] + q[2] + 0.5L * (p[0] * q[1] - q[0] * p[1])};
}
L3 linv(const L3& p) { return {-p[0], -p[1], -p[2]}; }
L3 ldelta(long double e, const L3& p) { return {e * p[0], e * p[1], e * e * p[2]}; }
long double lgauge(const L3& p) {
  const long double r2 = p[0] * p[0] + p[1] * p[1];
  return std::pow(r2 * r2 + 16.0L * p[2] * p[2], 0.25L);
}
L3 to_l3(const PQ& p) { return {(long double)static_cast<double>(p[0]), (long double)static_cast<double>(p[1]), (long double)static_cast<double>(p[2])}; }
PQ from_l3(const L3& p) { return PQ{Q(static_cast<double>(p[0])), Q(static_cast<double>(p[1])), Q(static_cast<double>(p[2]))}; }

template <class Real>
std::vector<ModelPoint<Real>> ball(const DilationStructure<Real>& s, const ModelPoint<Real>& x, double r, std::size_t n,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_ball(s, x, r, n, rng);
}

std::vector<IndexPair> consecutive(std::size_t n) {
  std::vector<IndexPair> p;
  for (std::size_t i = 0; i + 1 < n; ++i) p.push_back({i, i + 1});
  return p;
}

}  // namespace

// -------------------------------------------------------------- structures

TEST(Structures, HeisenbergGroupMatchesIndependentArithmetic) {
  using H = HeisenbergGroup<Q>;
  const auto s = heisenberg<Q>();
  const auto pts = ball(s, PQ(3), 1.0, 200, 1);
  for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
    const auto &a = pts[i], &b = pts[i + 1], &c = pts[i + 2];
    EXPECT_LT(coordinate_gap(H::mul(a, b), from_l3(lmul(to_l3(a), to_l3(b)))), 1e-15);
    EXPECT_LT(coordinate_gap(H::mul(H::mul(a, b), c), H::mul(a, H::mul(b, c))), 1e-30);
    EXPECT_EQ(H::mul(a, H::inv(a)), H::identity());
    EXPECT_NEAR(static_cast<double>(H::gauge(a)), static_cast<double>(lgauge(to_l3(a))), 1e-15);
    EXPECT_NEAR(static_cast<double>(H::distance(a, b)), static_cast<double>(lgauge(lmul(linv(to_l3(a)), to_l3(b)))),
                1e-15);
  }
  EXPECT_EQ(H::gauge(PQ{Q(1), Q(0), Q(0)}), Q(1));
  EXPECT_NEAR(static_cast<double>(H::gauge(PQ{Q(0), Q(0), Q(0.25)})), 1.0, 1e-30);
}

TEST(Structures, DilationsScaleDistancesAsExpected) {
  const double e = 0.3;
  const auto eu = euclidean<double>(2);
  const P2 x{0.1, -0.2}, u{0.5, 0.4};
  EXPECT_NEAR(eu.distance(eu.dilate(x, e, u), x), e * eu.distance(u, x), 1e-15);

  const auto sf = snowflake<double>(2, 0.5);
  EXPECT_NEAR(sf.distance(u, x), std::sqrt(std::hypot(0.4, 0.6)), 1e-15);
  EXPECT_NEAR(sf.distance(sf.dilate(x, e, u), x), e * sf.distance(u, x), 1e-15);

  const auto lp = log_perturbed<double>(2);
  EXPECT_NEAR(lp.distance(u, x), std::log1p(std::hypot(0.4, 0.6)), 1e-15);
  EXPECT_EQ(lp.dilate(x, e, u), eu.dilate(x, e, u));

  const auto hz = heisenberg<Q>();
  const PQ hx{Q(0.1), Q(0.2), Q(-0.05)}, hu{Q(0.3), Q(-0.1), Q(0.2)};
  EXPECT_LT(abs(hz.distance(hz.dilate(hx, Q(e), hu), hx) - Q(e) * hz.distance(hu, hx)), Q(1e-30));
}

TEST(Structures, FactoryAndParsing) {
  EXPECT_EQ(parse_structure_kind("euclid"), StructureKind::Euclid);
  EXPECT_EQ(parse_structure_kind("snowflake"), StructureKind::Snowflake);
  EXPECT_EQ(parse_structure_kind("logpe"), StructureKind::LogPerturbed);
  EXPECT_EQ(parse_structure_kind("heis"), StructureKind::Heisenberg);
  EXPECT_THROW(parse_structure_kind("sphere"), ArgumentError);
  EXPECT_EQ(make_structure<double>(StructureKind::Heisenberg, 2).dim(), 3u);
  EXPECT_EQ(make_structure<double>(StructureKind::Euclid, 3).dim(), 3u);
  EXPECT_THROW(snowflake<double>(2, 1.5), ArgumentError);
}

TEST(Structures, BallSamplesStayInsideTheBall) {
  for (auto kind : {StructureKind::Euclid, StructureKind::Snowflake, StructureKind::LogPerturbed,
                    StructureKind::Heisenberg}) {
    const auto s = make_structure<double>(kind);
    const P2 x0 = kind == StructureKind::Heisenberg ? P2{0.2, -0.1, 0.3} : P2{0.2, -0.1};
    const auto pts = ball(s, x0, 0.7, 500, 3);
    ASSERT_EQ(pts.size(), 500u);
    for (const auto& p : pts) EXPECT_LE(s.distance(x0, p), 0.7);
  }
}

// ------------------------------------------------------------------ axioms

TEST(Axioms, UnitAndSemigroupLawsOnAllStructures) {
  for (auto kind : {StructureKind::Euclid, StructureKind::Snowflake, StructureKind::LogPerturbed,
                    StructureKind::Heisenberg}) {
    const auto s = make_structure<Q>(kind);
    std::mt19937_64 rng(5);
    const PQ x(s.dim());
    const auto pts = sample_ball(s, x, 1.0, 400, rng);
    std::vector<AxiomSample<Q>> sample;
    for (const auto& u : pts) sample.push_back({x, Q(ts::uniform(rng, 0.01, 1.0)), Q(ts::uniform(rng, 0.01, 1.0)), u});
    const auto r = check_A1_A2(s, sample);
    EXPECT_LE(r.a1, 1e-12) << s.name();
    EXPECT_LE(r.a2, 1e-12) << s.name();
  }
}

TEST(Axioms, BallInclusionsHold) {
  for (auto kind : {StructureKind::Euclid, StructureKind::Snowflake, StructureKind::LogPerturbed,
                    StructureKind::Heisenberg}) {
    const auto s = make_structure<double>(kind);
    std::mt19937_64 rng(6);
    const auto r = check_A0(s, P2(s.dim()), dyadic_schedule(1, 6), 200, rng);
    EXPECT_TRUE(r.ok()) << s.name() << " inner " << r.worst_inner << " outer " << r.worst_outer;
  }
}

TEST(Axioms, RescaledDistanceIsExactForSelfSimilarModels) {
  for (auto kind : {StructureKind::Euclid, StructureKind::Snowflake, StructureKind::Heisenberg}) {
    const auto s = make_structure<Q>(kind);
    const PQ x(s.dim());
    const auto pts = ball(s, x, 2.0, 600, 7);
    const auto r = check_A3(s, x, model_tangent_distance<Q>(kind, 2, 0.5), pts, consecutive(pts.size()),
                            dyadic_schedule(3, 10));
    EXPECT_TRUE(r.estimate.exact) << s.name();
    for (double v : r.estimate.residuals) EXPECT_LE(v, 1e-12) << s.name();
  }
}

TEST(Axioms, LogPerturbedRescaledDistanceConvergesAtOrderOne) {
  const auto s = log_perturbed<double>(2);
  const P2 x(2);
  const auto pts = ball(s, x, 2.0, 1000, 8);
  const auto pairs = consecutive(pts.size());
  const auto r = check_A3(s, x, model_tangent_distance<double>(StructureKind::LogPerturbed, 2, 0.5), pts, pairs,
                          dyadic_schedule(3, 10));
  EXPECT_EQ(r.estimate.verdict, Verdict::Converges);
  EXPECT_NEAR(r.estimate.fitted_order, 1.0, 0.2);
  // (1/eps) ln(1 + eps t) = t - eps t^2 / 2 + O(eps^2)
  double tmax = 0.0;
  for (const auto& [a, b] : pairs) tmax = std::max(tmax, euclidean_norm(pts[a] - pts[b]));
  const double eps = r.estimate.schedule.back();
  EXPECT_NEAR(r.estimate.finest(), eps * tmax * tmax / 2.0, eps * eps * std::pow(tmax, 3));
  // self-consistent mode on the unit ball, where eps t stays small
  const auto unit = ball(s, x, 1.0, 1000, 9);
  const auto sc = check_A3(s, x, std::nullopt, unit, consecutive(unit.size()), dyadic_schedule(3, 10));
  EXPECT_TRUE(sc.self_consistent);
  EXPECT_EQ(sc.estimate.verdict, Verdict::Converges);
  EXPECT_NEAR(sc.estimate.fitted_order, 1.0, 0.2);
}

TEST(Axioms, EuclideanDifferenceHasTheClosedForm) {
  const auto s = euclidean<double>(2);
  const P2 x{0.1, 0.2}, u{0.4, -0.3}, v{-0.2, 0.5};
  for (double e : dyadic_schedule(1, 10)) {
    const P2 expect = x + e * (u - x) + (v - u);
    EXPECT_LT(coordinate_gap(difference(s, x, e, u, v), expect), 1e-15 / e);
    EXPECT_LT(coordinate_gap(difference(s, x, e, u, u), s.dilate(x, e, u)), 1e-15 / e);
  }
  EXPECT_LT(coordinate_gap(tangent_limit(s, TangentOp::Difference, x, u, v, dyadic_schedule(3, 10)), x + (v - u)),
            1e-12);
}

TEST(Axioms, HeisenbergDifferenceHasTheClosedForm) {
  const auto s = heisenberg<Q>();
  const PQ x{Q(0.1), Q(-0.2), Q(0.05)};
  const auto pts = ball(s, x, 1.0, 50, 9);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto &u = pts[i], &v = pts[i + 1];
    const L3 a = lmul(linv(to_l3(x)), to_l3(u)), b = lmul(linv(to_l3(x)), to_l3(v));
    for (double e : {0.25, 0.015625}) {
      const L3 expect = lmul(lmul(to_l3(x), ldelta(e, a)), lmul(linv(a), b));
      EXPECT_LT(coordinate_gap(difference(s, x, Q(e), u, v), from_l3(expect)), 1e-14);
    }
    const L3 lim = lmul(to_l3(x), lmul(linv(a), b));
    EXPECT_LT(coordinate_gap(tangent_limit(s, TangentOp::Difference, x, u, v, dyadic_schedule(3, 10)), from_l3(lim)),
              1e-12);
  }
}

TEST(Axioms, TangentSumOfInverseReturnsTheBasePoint) {
  for (auto kind : {StructureKind::Euclid, StructureKind::Snowflake, StructureKind::LogPerturbed,
                    StructureKind::Heisenberg}) {
    const auto s = make_structure<Q>(kind);
    PQ x(s.dim());
    x[0] = Q(0.1);
    const auto sched = dyadic_schedule(3, 10);
    for (const auto& u : ball(s, x, 0.5, 30, 10)) {
      const auto inv = tangent_limit(s, TangentOp::Inverse, x, u, u, sched);
      const auto back = tangent_limit(s, TangentOp::Sum, x, u, inv, sched);
      EXPECT_LT(coordinate_gap(back, x), 1e-9) << s.name();
    }
  }
}

TEST(Axioms, DifferenceOutsideTheDomainIsRejected) {
  const auto s = euclidean<double>(2);
  EXPECT_THROW(difference(s, P2{0, 0}, 0.5, P2{2, 0}, P2{0, 0}), DomainError);
  EXPECT_THROW(difference(s, P2{0, 0}, 0.5, P2{0, 0}, P2{0, 1.5}), DomainError);
}

TEST(Axioms, DifferencesConvergeCauchyAtOrderOneForLogPerturbed) {
  const auto s = log_perturbed<double>(2);
  const P2 x(2);
  const auto pts = ball(s, x, 1.0, 500, 11);
  const auto r = check_A4(s, x, pts, consecutive(pts.size()), dyadic_schedule(3, 10));
  EXPECT_EQ(r.estimate.verdict, Verdict::Converges);
  EXPECT_NEAR(r.estimate.fitted_order, 1.0, 0.2);
}

TEST(Axioms, EuclideanDifferenceTableIsLinearInEps) {
  // Delta^x_eps - Delta^x_{eps/2} = (eps/2)(u - x): order one, not exact.
  const auto s = euclidean<double>(2);
  const P2 x(2);
  const auto pts = ball(s, x, 1.0, 300, 12);
  const auto pairs = consecutive(pts.size());
  const auto r = check_A4(s, x, pts, pairs, dyadic_schedule(3, 10));
  double umax = 0.0;
  for (const auto& [a, b] : pairs) umax = std::max(umax, euclidean_norm(pts[a] - x));
  for (std::size_t k = 0; k < r.estimate.schedule.size(); ++k)
    EXPECT_NEAR(r.estimate.residuals[k], r.estimate.schedule[k] * umax, 1e-12);
  EXPECT_NEAR(r.estimate.fitted_order, 1.0, 1e-9);
}

TEST(Axioms, TransportByIdentityAndTranslation) {
  const auto s = euclidean<double>(2);
  const auto pts = ball(s, P2(2), 1.0, 100, 13);
  const auto same = transport<double>(s, [](const P2& p) { return p; }, [](const P2& p) { return p; }, pts);
  const P2 shift{0.3, -0.7};
  const auto moved = transport<double>(s, [shift](const P2& p) { return p + shift; },
                                       [shift](const P2& p) { return p - shift; }, pts);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto &u = pts[i], &v = pts[i + 1];
    EXPECT_EQ(same.distance(u, v), s.distance(u, v));
    EXPECT_EQ(same.dilate(u, 0.3, v), s.dilate(u, 0.3, v));
    EXPECT_NEAR(moved.distance(u, v), s.distance(u, v), 1e-15);
    EXPECT_LT(coordinate_gap(moved.dilate(u, 0.3, v), s.dilate(u, 0.3, v)), 1e-15);
  }
  EXPECT_THROW(transport<double>(s, [](const P2& p) { return p; }, [](const P2& p) { return 2.0 * p; }, pts),
               ArgumentError);
}

TEST(Axioms, MagnifiedLogPerturbedStructuresAreCauchy) {
  const auto s = log_perturbed<double>(2);
  const P2 x(2);
  const auto pts = ball(s, x, 1.0, 200, 14);
  const auto sched = dyadic_schedule(3, 10);
  std::vector<double> gaps;
  for (std::size_t k = 0; k + 1 < sched.size(); ++k) {
    const auto m0 = magnify(s, x, sched[k]), m1 = magnify(s, x, sched[k + 1]);
    double g = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      g = std::max(g, std::abs(m0.distance(pts[i], pts[i + 1]) - m1.distance(pts[i], pts[i + 1])));
      g = std::max(g, coordinate_gap(m0.dilate(pts[i], 0.5, pts[i + 1]), m1.dilate(pts[i], 0.5, pts[i + 1])));
    }
    gaps.push_back(g);
  }
  for (std::size_t k = 1; k < gaps.size(); ++k) EXPECT_LT(gaps[k], gaps[k - 1]);
  EXPECT_THROW(magnify(s, x, 1.5), ArgumentError);
}

TEST(Axioms, LinearityResiduals) {
  const auto sched = std::vector<double>{0.5, 0.25};
  const auto eu = euclidean<double>(2);
  const auto pe = ball(eu, P2(2), 1.0, 300, 15);
  EXPECT_LE(linearity_residual(eu, P2(2), 0.5, pe, consecutive(pe.size()), sched).value(), 1e-15);

  const auto hz = heisenberg<Q>();
  const auto ph = ball(hz, PQ(3), 1.0, 300, 16);
  EXPECT_LE(linearity_residual(hz, PQ(3), Q(0.5), ph, consecutive(ph.size()), sched).value(), 1e-9);

  const auto lp = log_perturbed<double>(2);
  const auto pl = ball(lp, P2(2), 1.0, 300, 17);
  const auto pairs = consecutive(pl.size());
  const auto r = linearity_residual(lp, P2(2), 0.5, pl, pairs, sched);
  double expect = 0.0;
  for (const auto& [a, b] : pairs) {
    const double t = euclidean_norm(pl[a] - pl[b]);
    expect = std::max(expect, std::abs(std::log1p(0.5 * t) - 0.5 * std::log1p(t)));
  }
  EXPECT_NEAR(r.homothety, expect, 1e-14);
  EXPECT_GT(r.value(), 0.05);
}

TEST(Axioms, ConicalGroupChecksPassOnHeisenberg) {
  const auto hz = heisenberg<Q>();
  const auto pts = ball(hz, PQ(3), 1.0, 2000, 18);
  std::mt19937_64 rng(19);
  const auto rep = conical_checks(pts, dyadic_schedule(3, 10), detail::random_pairs(pts.size(), 5000, rng));
  for (const auto& i : rep.items) EXPECT_TRUE(i.pass) << i.name << " = " << i.value;
  EXPECT_TRUE(rep.ok());
  EXPECT_LE(rep["gauge_homogeneity"].value, 1e-14);
  EXPECT_LE(rep["dilation_morphism"].value, 1e-12);
  EXPECT_THROW(rep["unknown"], ArgumentError);
}

// ----------------------------------------------------------- derivatives

TEST(Derivative, LinearEuclideanMapIsExact) {
  const auto s = euclidean<Q>(2);
  const std::vector<std::vector<double>> M{{2, 1}, {0.5, 3}};
  const PointMap<Q> f = [](const PQ& u) { return PQ{2 * u[0] + u[1], Q(0.5) * u[0] + 3 * u[1]}; };
  const PQ x{Q(0.2), Q(-0.1)};
  const auto r = pansu_residual(s, s, f, affine_candidate<Q>(f(x), x, M), x, ball(s, x, 1.0, 300, 20),
                                dyadic_schedule(3, 10));
  for (double v : r.residuals) EXPECT_LE(v, 1e-12);
}

TEST(Derivative, SmoothEuclideanMapConvergesAtOrderOne) {
  const auto s = euclidean<Q>(2);
  const PointMap<Q> f = [](const PQ& u) { return PQ{sin(u[0]), u[1] + u[0] * u[0]}; };
  const PQ x(2);
  const auto r = pansu_residual(s, s, f, affine_candidate<Q>(f(x), x, {{1, 0}, {0, 1}}), x,
                                ball(s, x, 1.0, 300, 21), dyadic_schedule(3, 10));
  EXPECT_EQ(r.verdict, Verdict::Converges);
  EXPECT_GE(r.fitted_order, 1.0);
  EXPECT_LT(r.fitted_order, 1.1);
}

TEST(Derivative, HeisenbergShearDiverges) {
  const auto s = heisenberg<Q>();
  const PointMap<Q> f = [](const PQ& u) { return PQ{u[0], u[1], u[2] + u[0]}; };
  const PQ x(3);
  const auto r = pansu_residual(s, s, f, heisenberg_translation_candidate<Q>(f(x), x), x,
                                ball(s, x, 1.0, 300, 22), dyadic_schedule(3, 10));
  EXPECT_EQ(r.verdict, Verdict::Diverges);
  EXPECT_NEAR(r.fitted_order, -0.5, 0.05);
  EXPECT_GT(r.finest(), r.residuals[1]);
}

TEST(Derivative, NonMorphismCandidateIsRejected) {
  const auto s = heisenberg<Q>();
  const PointMap<Q> f = [](const PQ& u) { return u; };
  const PointMap<Q> bad = [](const PQ& u) { return PQ{u[0], u[1], u[2] + u[0]}; };
  EXPECT_THROW(pansu_residual(s, s, f, bad, PQ(3), ball(s, PQ(3), 1.0, 50, 23), dyadic_schedule(3, 6)),
               ArgumentError);
}

TEST(AxiomSuite, SmallRunsReportPlausibleNumbers) {
  AxiomOptions opt;
  opt.samples = 400;
  opt.pairs = 400;
  const auto eu = axiom_suite(euclidean<Q>(2), model_tangent_distance<Q>(StructureKind::Euclid, 2, 0.5), opt);
  EXPECT_TRUE(eu.a0.ok());
  EXPECT_LE(eu.a1, 1e-12);
  EXPECT_LE(eu.a2, 1e-12);
  EXPECT_TRUE(eu.a3.exact);
  EXPECT_EQ(eu.linearity, 0.0);
  const auto lp = axiom_suite(log_perturbed<Q>(2), model_tangent_distance<Q>(StructureKind::LogPerturbed), opt);
  EXPECT_FALSE(lp.a3_self_consistent);
  EXPECT_NEAR(lp.a3.fitted_order, 1.0, 0.2);
  EXPECT_EQ(axiom_suite(log_perturbed<Q>(2), std::nullopt, opt).a3.verdict, Verdict::Converges);
  EXPECT_NEAR(lp.a4.fitted_order, 1.0, 0.2);
}
