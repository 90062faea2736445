// Tour of the library: finite spaces and relations, Gromov-Hausdorff
// distance, a dilation structure's axioms, and a zoom sequence.

#include <cstdio>
#include <random>

#include "mc/mc.hpp"

using namespace mc;

int main() {
  // Two small metric spaces: an equilateral triangle and a path 0 - 1 - 2.
  auto tri = make_space(FiniteMetricSpace({"a", "b", "c"}, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  auto path = make_space(FiniteMetricSpace({"p", "q", "r"}, {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}));

  const Relation rho(tri, path, {{PointId{0}, PointId{0}}, {PointId{1}, PointId{1}}, {PointId{2}, PointId{2}}});
  const auto q = map_quality(rho);
  std::printf("relation: accuracy %.3f  resolution %.3f  precision %.3f\n", q.accuracy, q.resolution, q.precision);

  const auto gh = gh_exact(tri, path);
  std::printf("GH distance %.3f (classical %.3f), exact: %s\n", gh.value, gh.value / 2, gh.exact ? "yes" : "no");

  // Axioms of the Heisenberg dilation structure in quad precision.
  AxiomOptions opt;
  opt.samples = 500;
  opt.pairs = 500;
  opt.seed = 1;
  const auto h = heisenberg<quad>();
  const auto rep = axiom_suite(h, model_tangent_distance<quad>(StructureKind::Heisenberg), opt);
  std::printf("%s: A1 %.1e  A2 %.1e  A3 %s (finest %.1e)  A4 %s (finest %.1e)\n", rep.structure.c_str(), rep.a1,
              rep.a2, to_string(rep.a3.verdict), rep.a3.finest(), to_string(rep.a4.verdict), rep.a4.finest());

  // Zooming into the log-perturbed plane at the origin.
  const auto lp = log_perturbed<double>(2);
  const auto sched = dyadic_schedule(3, 8);
  const auto z = build_zoom(lp, ZPoint(2),
                            a3_tangent_provider(lp, model_tangent_distance<double>(StructureKind::LogPerturbed), sched),
                            sched);
  const auto cascade = cascade_check(z, z.schedule, 0.5);
  std::printf("zoom on %s, %zu pixels\n", lp.name().c_str(), z.pixels->size());
  for (const auto& row : cascade.rows)
    std::printf("  eps %-10g modulus %.3e  cascade %.3e <= %.3e\n", row.eps, z.modulus[z.index_of(row.eps)],
                row.measured, row.bound);
  return cascade.all_hold ? 0 : 1;
}
