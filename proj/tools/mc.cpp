// mc: command-line front end for the metric-maps library.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mc/axioms.hpp"
#include "mc/io.hpp"
#include "mc/mc.hpp"
#include "mc/precision.hpp"

namespace {

using json = nlohmann::json;
constexpr const char* kVersion = "0.1.0";

/// Reads TOML through CLI11 and JSON objects through nlohmann; nested JSON
/// objects address subcommands, just like TOML sections.
class TomlOrJsonConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream toml(text);
      return CLI::ConfigTOML::from_config(toml);
    }
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw CLI::ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static void flatten(const json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (it->is_object()) {
        auto p = parents;
        p.push_back(it.key());
        flatten(*it, p, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array())
        for (const auto& v : *it) item.inputs.push_back(scalar(v));
      else
        item.inputs.push_back(scalar(*it));
      out.push_back(std::move(item));
    }
  }
};

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used == 0 || used != cell.size()) throw mc::StructuralError(what + ": '" + cell + "' is not a number");
    v.push_back(x);
  }
  if (v.empty()) throw mc::StructuralError(what + ": empty list");
  return v;
}

/// "a:b" is the dyadic schedule 2^-a .. 2^-b; otherwise a comma list.
std::vector<double> parse_schedule(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return parse_list(text, "--schedule");
  try {
    std::size_t u1 = 0, u2 = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    const int lo = std::stoi(a, &u1), hi = std::stoi(b, &u2);
    if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument("trailing characters");
    return mc::dyadic_schedule(lo, hi);
  } catch (const mc::ArgumentError&) {
    throw;
  } catch (const std::exception&) {
    throw mc::StructuralError("--schedule: expected a:b or a comma list, got '" + text + "'");
  }
}

// ------------------------------------------------------------ options

struct Globals {
  unsigned jobs = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool csv = false;
};

struct StructureArgs {
  std::string structure;
  double alpha = 0.5;
  std::size_t dim = 2;
  std::string x;
  bool self_consistent = false;
};

void add_structure_options(CLI::App* sub, StructureArgs& a, bool with_x) {
  sub->add_option("--structure", a.structure, "euclid | snowflake | logpe | heis")->required();
  sub->add_option("--alpha", a.alpha, "snowflake exponent in (0,1]")->capture_default_str();
  sub->add_option("--dim", a.dim, "Euclidean dimension (heis is always 3)")->capture_default_str();
  sub->add_flag("--self-consistent", a.self_consistent,
                "estimate the tangent distance from the finest scale instead of the known model");
  if (with_x) sub->add_option("--x", a.x, "base point, comma separated (default: origin)");
}

template <class Real>
mc::DilationStructure<Real> structure_of(const StructureArgs& a, mc::StructureKind& kind) {
  kind = mc::parse_structure_kind(a.structure);
  return mc::make_structure<Real>(kind, a.dim, a.alpha);
}

template <class Real>
mc::ModelPoint<Real> base_point(const StructureArgs& a, std::size_t dim) {
  mc::ModelPoint<Real> x(dim);
  if (a.x.empty()) return x;
  const auto v = parse_list(a.x, "--x");
  if (v.size() != dim)
    throw mc::ArgumentError("--x has " + std::to_string(v.size()) + " coordinates, the structure has " +
                            std::to_string(dim));
  for (std::size_t i = 0; i < dim; ++i) x[i] = Real(v[i]);
  return x;
}

struct Result {
  json report;
  json csv_rows = json::array();
  int code = 0;
};

json point_json(const std::vector<double>& p) { return json(p); }

// ----------------------------------------------------------- commands

Result cmd_validate(const std::string& path) {
  const auto space = mc::io::read_space(path);
  const auto rep = mc::validate_metric(space);
  Result r;
  r.report = mc::io::to_json(rep, space);
  r.report["points"] = space.size();
  for (const auto& v : r.report["violations"])
    r.csv_rows.push_back({{"kind", v["kind"]},
                          {"i", v["indices"][0]},
                          {"j", v["indices"][1]},
                          {"k", v["indices"][2]},
                          {"slack", v["slack"]}});
  r.code = rep.ok ? 0 : 3;
  return r;
}

void require_metric(const mc::FiniteMetricSpace& s, const std::string& which) {
  const auto rep = mc::validate_metric(s);
  if (!rep.ok) {
    const auto& v = rep.violations.front();
    throw mc::DomainError(which + " space violates the metric axioms (" + mc::to_string(v.kind) + " at " +
                          std::to_string(v.i.index) + "," + std::to_string(v.j.index) + "," +
                          std::to_string(v.k.index) + ", slack " + std::to_string(v.slack) + "; " +
                          std::to_string(rep.violations.size()) + " violations)");
  }
}

Result cmd_quality(const std::string& path) {
  const auto rho = mc::io::read_relation(path);
  require_metric(rho.src_space(), "source");
  require_metric(rho.dst_space(), "destination");
  const auto q = mc::map_quality(rho);
  Result r;
  r.report = mc::io::to_json(q);
  r.report["pairs"] = rho.size();
  r.csv_rows.push_back({{"accuracy", q.accuracy}, {"resolution", q.resolution}, {"precision", q.precision}});
  return r;
}

Result cmd_generalize(const std::string& path, double eps, double mu) {
  const auto rho = mc::io::read_relation(path);
  require_metric(rho.src_space(), "source");
  require_metric(rho.dst_space(), "destination");
  const auto bar = mc::generalize(rho, eps, mu);
  const auto rep = mc::check_generalization_bounds(rho, bar, eps, mu);
  Result r;
  r.report = {{"eps", eps},
              {"mu", mu},
              {"pairs", mc::io::pairs_json(bar)},
              {"quality", mc::io::to_json(mc::map_quality(bar))},
              {"source_quality", mc::io::to_json(mc::map_quality(rho))},
              {"bounds", mc::io::to_json(rep)}};
  for (const auto& c : r.report["bounds"]["checks"]) r.csv_rows.push_back(c);
  r.code = rep.unconditional_ok ? 0 : 3;
  return r;
}

Result cmd_gh(const std::string& xs, const std::string& ys, std::uint64_t budget, bool classical,
              const std::string& method) {
  auto X = mc::make_space(mc::io::read_space(xs));
  auto Y = mc::make_space(mc::io::read_space(ys));
  require_metric(*X, "--x");
  require_metric(*Y, "--y");
  if (budget == 0) throw mc::ArgumentError("--budget must be positive");
  mc::GhResult g = [&] {
    const bool small = std::min(X->size(), Y->size()) <= 16;
    if (method == "upper" || (method == "auto" && !small)) {
      auto u = mc::gh_upper_bound(X, Y);
      u.lower_bound = mc::gh_lower_bound(*X, *Y);
      return u;
    }
    if (method != "exact" && method != "auto") throw mc::ArgumentError("--method must be auto, exact or upper");
    return mc::gh_exact(X, Y, budget);
  }();
  Result r;
  r.report = mc::io::to_json(g, classical);
  r.csv_rows.push_back({{"value", r.report["value"]},
                        {"exact", g.exact},
                        {"lower_bound", r.report["lower_bound"]},
                        {"upper_bound", r.report["upper_bound"]},
                        {"nodes_explored", g.nodes_explored}});
  return r;
}

struct AxiomArgs {
  StructureArgs s;
  std::size_t samples = 10000;
  std::size_t pairs = 10000;
  std::size_t conical_pairs = 100000;
  std::string schedule = "3:10";
};

Result cmd_axioms(const AxiomArgs& a, std::uint64_t seed) {
  using mc::quad;
  mc::StructureKind kind{};
  const auto s = structure_of<quad>(a.s, kind);
  mc::AxiomOptions opt;
  opt.samples = a.samples;
  opt.pairs = a.pairs;
  opt.schedule = parse_schedule(a.schedule);
  opt.seed = seed;
  std::optional<mc::TangentDistance<quad>> guess;
  if (!a.s.self_consistent) guess = mc::model_tangent_distance<quad>(kind, a.s.dim, a.s.alpha);
  const auto rep = mc::axiom_suite(s, guess, opt);
  Result r;
  r.report = {{"structure", rep.structure},
              {"alpha", a.s.alpha},
              {"dim", s.dim()},
              {"constants", {{"domain_radius", 1.0}, {"A", 2.0}, {"B", 3.0}}},
              {"a0", {{"ok", rep.a0.ok()},
                      {"inner", rep.a0.inner},
                      {"outer", rep.a0.outer},
                      {"worst_inner", rep.a0.worst_inner},
                      {"worst_outer", rep.a0.worst_outer}}},
              {"a1", rep.a1},
              {"a2", rep.a2},
              {"skipped", rep.skipped},
              {"a3_mode", rep.a3_self_consistent ? "self-consistent" : "model"},
              {"a3", mc::io::to_json(rep.a3)},
              {"a4", mc::io::to_json(rep.a4)},
              {"a4_limits", rep.a4_limits},
              {"linearity", rep.linearity}};
  if (kind == mc::StructureKind::Heisenberg) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    const auto sample = mc::sample_ball(s, mc::ModelPoint<quad>(3), 1.0, a.samples, rng);
    const auto pairs = mc::detail::random_pairs(sample.size(), a.conical_pairs, rng);
    const auto c = mc::conical_checks(sample, opt.schedule, pairs);
    json items = json::array();
    for (const auto& i : c.items)
      items.push_back({{"name", i.name}, {"value", i.value}, {"tolerance", i.tolerance}, {"pass", i.pass}});
    r.report["conical"] = {{"ok", c.ok()}, {"items", items}, {"h0", mc::io::to_json(c.h0)}};
  }
  for (std::size_t i = 0; i < rep.a3.schedule.size(); ++i) {
    json row = {{"eps", rep.a3.schedule[i]}, {"a3", rep.a3.residuals[i]}, {"a4", nullptr}};
    for (std::size_t k = 0; k < rep.a4.schedule.size(); ++k)
      if (rep.a4.schedule[k] == rep.a3.schedule[i]) row["a4"] = rep.a4.residuals[k];
    r.csv_rows.push_back(row);
  }
  return r;
}

struct ZoomArgs {
  StructureArgs s;
  double mu = 0.5;
  std::string schedule = "3:10";
  std::size_t generators = 24;
  int levels = 6;
  long viewpoint = -1;
  double lattice_step = 0.25;
};

mc::ZoomSequence zoom_of(const ZoomArgs& a, std::uint64_t seed, bool lattice) {
  mc::StructureKind kind{};
  const auto s = structure_of<double>(a.s, kind);
  const auto x = base_point<double>(a.s, s.dim());
  const auto sched = parse_schedule(a.schedule);
  std::optional<mc::ZDistance> guess;
  if (!a.s.self_consistent) guess = mc::model_tangent_distance<double>(kind, a.s.dim, a.s.alpha);
  mc::TemplateOptions t;
  t.generators = a.generators;
  t.levels = a.levels;
  t.lattice = lattice;
  t.lattice_step = a.lattice_step;
  t.seed = seed;
  return mc::build_zoom(s, x, mc::a3_tangent_provider(s, guess, sched), sched, t);
}

json estimate_or_null(const std::optional<mc::ConvergenceEstimate>& e) {
  return e ? mc::io::to_json(*e) : json(nullptr);
}

Result cmd_zoom(const ZoomArgs& a, std::uint64_t seed) {
  const auto z = zoom_of(a, seed, false);
  Result r;
  json table = json::array();
  for (double eps : z.schedule) {
    const auto q = mc::zoom_quality(z, eps);
    table.push_back({{"eps", eps},
                     {"accuracy", q.quality.accuracy},
                     {"precision", q.quality.precision},
                     {"resolution", q.quality.resolution},
                     {"raw_resolution", q.raw_resolution}});
  }
  const auto cas = mc::cascade_check(z, z.schedule, a.mu);
  json crow = json::array();
  for (const auto& c : cas.rows)
    crow.push_back({{"eps", c.eps}, {"measured", mc::io::num(c.measured)}, {"bound", c.bound}, {"holds", c.holds}});
  json bvm = json::array();
  for (const auto& [m, b] : cas.bound_vs_mu) bvm.push_back({{"mu", m}, {"bound", b}});
  const auto st = mc::scale_stability(z, a.mu);
  json srow = json::array();
  for (std::size_t k = 0; k < st.schedule.size(); ++k)
    srow.push_back({{"eps", st.schedule[k]},
                    {"modulus", mc::io::num(st.modulus_table[k])},
                    {"self_similarity", st.self_similarity_table[k]}});
  r.report = {{"structure", z.structure.name()},
              {"x", point_json(z.x.to_doubles())},
              {"mu", a.mu},
              {"template_points", z.tmpl.points.size()},
              {"cover", z.tmpl.cover},
              {"zoom", table},
              {"cascade", {{"rows", crow},
                           {"all_hold", cas.all_hold},
                           {"bound_shrinks_as_eps_decreases", cas.bound_shrinks_as_eps_decreases},
                           {"bound_vs_mu", bvm},
                           {"bound_grows_as_mu_decreases", cas.bound_grows_as_mu_decreases}}},
              {"stability", {{"rows", srow},
                             {"modulus", st.modulus.schedule.empty() ? json(nullptr) : mc::io::to_json(st.modulus)},
                             {"limit_pairs", st.limit.size()},
                             {"self_similarity_limit", st.self_similarity_limit},
                             {"self_similarity", estimate_or_null(st.self_similarity)},
                             {"self_similarity_bound", st.self_similarity_bound},
                             {"self_similar", st.self_similar},
                             {"empty", st.empty_flag}}}};
  if (a.viewpoint >= 0) {
    const auto zl = zoom_of(a, seed, true);
    const auto vp = mc::viewpoint_stability(zl, static_cast<std::size_t>(a.viewpoint));
    json rows = json::array();
    for (std::size_t k = 0; k < vp.rows.size(); ++k)
      rows.push_back({{"eps", vp.rows[k].eps},
                      {"witnesses", vp.rows[k].witnesses},
                      {"modulus", mc::io::num(vp.modulus_table[k])}});
    r.report["viewpoint"] = {{"pixel", vp.u_prime},
                             {"rows", rows},
                             {"modulus", estimate_or_null(vp.modulus)},
                             {"isometry_residual", vp.isometry_residual},
                             {"empty", vp.empty_flag}};
  }
  for (std::size_t k = 0; k < z.schedule.size(); ++k) {
    json row = {{"eps", z.schedule[k]}, {"F", z.modulus[k]}, {"cascade_measured", nullptr},
                {"cascade_bound", nullptr}, {"modulus", nullptr}, {"self_similarity", nullptr}};
    for (const auto& c : cas.rows)
      if (c.eps == z.schedule[k]) {
        row["cascade_measured"] = mc::io::num(c.measured);
        row["cascade_bound"] = c.bound;
      }
    for (std::size_t i = 0; i < st.schedule.size(); ++i)
      if (st.schedule[i] == z.schedule[k]) {
        row["modulus"] = mc::io::num(st.modulus_table[i]);
        row["self_similarity"] = st.self_similarity_table[i];
      }
    r.csv_rows.push_back(row);
  }
  r.code = cas.all_hold ? 0 : 3;
  return r;
}

Result cmd_foveal(const ZoomArgs& a, std::uint64_t seed) {
  const auto z = zoom_of(a, seed, false);
  const auto st = mc::scale_stability(z, a.mu);
  const auto fs = mc::foveal(z, st);
  const auto fp = mc::foveal_fixedpoint_check(z, fs);
  Result r;
  json rows = json::array();
  bool all = true;
  for (std::size_t k = 0; k < fs.rows.size(); ++k) {
    const auto& f = fs.rows[k];
    all = all && f.inner_holds && f.modulus_holds && f.outer_identical;
    json row = {{"eps", f.eps},
                {"restricted_accuracy", f.restricted_accuracy},
                {"inner_bound", f.inner_bound},
                {"inner_holds", f.inner_holds},
                {"modulus", f.modulus},
                {"modulus_bound", f.modulus_bound},
                {"modulus_holds", f.modulus_holds},
                {"outer_identical", f.outer_identical},
                {"identical_to_source", f.identical_to_source},
                {"uncovered", f.uncovered},
                {"fixed_point_distance", mc::io::num(fp[k].distance)}};
    rows.push_back(row);
    r.csv_rows.push_back(row);
  }
  r.report = {{"structure", z.structure.name()},
              {"x", point_json(z.x.to_doubles())},
              {"mu", a.mu},
              {"cover", z.tmpl.cover},
              {"slack", {{"inner", 2.0 * a.mu * z.tmpl.cover}, {"modulus", 2.0 * z.tmpl.cover}}},
              {"multivalued_fallback", fs.multivalued_fallback},
              {"rows", rows},
              {"all_hold", all}};
  r.code = all ? 0 : 3;
  return r;
}

struct PansuArgs {
  StructureArgs s;
  std::string map;
  std::size_t samples = 2000;
  std::string schedule = "3:10";
};

Result cmd_pansu(const PansuArgs& a, std::uint64_t seed) {
  using mc::quad;
  using P = mc::ModelPoint<quad>;
  using H = mc::HeisenbergGroup<quad>;
  mc::StructureKind kind{};
  const auto s = structure_of<quad>(a.s, kind);
  const P x = base_point<quad>(a.s, s.dim());
  mc::PointMap<quad> f, L;
  if (kind == mc::StructureKind::Euclid) {
    if (s.dim() != 2) throw mc::ArgumentError("pansu: the Euclidean maps are defined on R^2");
    if (a.map == "linear") {
      const std::vector<std::vector<double>> M{{2.0, 1.0}, {0.5, 3.0}};
      f = [M](const P& u) {
        return P{quad(M[0][0]) * u[0] + quad(M[0][1]) * u[1], quad(M[1][0]) * u[0] + quad(M[1][1]) * u[1]};
      };
      L = mc::affine_candidate<quad>(f(x), x, M);
    } else if (a.map == "smooth") {
      f = [](const P& u) {
        using std::sin;
        return P{sin(u[0]), u[1] + u[0] * u[0]};
      };
      using std::cos;
      const std::vector<std::vector<double>> J{{static_cast<double>(cos(x[0])), 0.0},
                                               {static_cast<double>(2 * x[0]), 1.0}};
      L = mc::affine_candidate<quad>(f(x), x, J);
    } else {
      throw mc::ArgumentError("pansu: map for euclid must be linear or smooth");
    }
  } else if (kind == mc::StructureKind::Heisenberg) {
    if (a.map == "shear") {
      f = [](const P& u) { return P{u[0], u[1], u[2] + u[0]}; };
    } else if (a.map == "translation") {
      const P g{quad(0.3), quad(-0.2), quad(0.1)};
      f = [g](const P& u) { return H::mul(g, u); };
    } else {
      throw mc::ArgumentError("pansu: map for heis must be shear or translation");
    }
    L = mc::heisenberg_translation_candidate<quad>(f(x), x);
  } else {
    throw mc::ArgumentError("pansu: structure must be euclid or heis");
  }
  std::mt19937_64 rng(seed);
  const auto sample = mc::sample_ball(s, x, 1.0, a.samples, rng);
  const auto e = mc::pansu_residual(s, s, f, L, x, sample, parse_schedule(a.schedule));
  Result r;
  r.report = {{"structure", s.name()}, {"map", a.map}, {"x", point_json(x.to_doubles())}, {"residual", mc::io::to_json(e)}};
  r.csv_rows = r.report["residual"]["table"];
  return r;
}

// ------------------------------------------------------------ output

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mc::StructuralError(path + ": cannot write output");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();

  CLI::App app{"mc: metric maps, Gromov-Hausdorff distances and dilation structures"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.config_formatter(std::make_shared<TomlOrJsonConfig>());
  CLI::Option* cfg = app.set_config("--config", "", "TOML or JSON file supplying any flag");

  Globals g;
  app.add_option("-j,--jobs", g.jobs, "worker threads (0: all cores)");
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("-o,--out,--report", g.out, "report file (default: stdout)");
  app.add_flag("--csv", g.csv, "write a flat CSV table instead of JSON");

  std::string space_path, relation_path, gh_x, gh_y, gh_method = "auto";
  double gen_eps = 0.0, gen_mu = 0.0;
  std::uint64_t budget = 1000000;
  bool classical = false;
  AxiomArgs ax;
  ZoomArgs zm, fv;
  PansuArgs pa;

  auto* validate = app.add_subcommand("validate", "check the metric axioms of a space file");
  validate->add_option("space,--space", space_path, "space file (.json or .csv)")->required();

  auto* quality = app.add_subcommand("quality", "accuracy, resolution and precision of a relation");
  quality->add_option("relation,--relation", relation_path, "relation JSON")->required();

  auto* generalize = app.add_subcommand("generalize", "cartographic generalization of a relation");
  generalize->add_option("relation,--relation", relation_path, "relation JSON")->required();
  generalize->add_option("--eps", gen_eps, "territory thickening")->required();
  generalize->add_option("--mu", gen_mu, "map thickening")->required();

  auto* gh = app.add_subcommand("gh", "Gromov-Hausdorff distance (minimum correspondence accuracy)");
  gh->add_option("--x", gh_x, "first space")->required();
  gh->add_option("--y", gh_y, "second space")->required();
  gh->add_option("--budget", budget, "branch-and-bound node budget")->capture_default_str();
  gh->add_option("--method", gh_method, "auto | exact | upper")->capture_default_str();
  gh->add_flag("--classical", classical, "report half the value (classical convention)");

  auto* axioms = app.add_subcommand("axioms", "dilation-structure axiom suite");
  add_structure_options(axioms, ax.s, false);
  axioms->add_option("--samples", ax.samples, "points per sampled ball")->capture_default_str();
  axioms->add_option("--pairs", ax.pairs, "random pairs per check")->capture_default_str();
  axioms->add_option("--conical-pairs", ax.conical_pairs, "pairs for the subadditivity check")->capture_default_str();
  axioms->add_option("--schedule", ax.schedule, "a:b for 2^-a..2^-b, or a comma list")->capture_default_str();

  auto add_zoom = [](CLI::App* sub, ZoomArgs& z) {
    add_structure_options(sub, z.s, true);
    sub->add_option("--mu", z.mu, "scale ratio, a power of 1/2")->capture_default_str();
    sub->add_option("--schedule", z.schedule, "a:b for 2^-a..2^-b, or a comma list")->capture_default_str();
    sub->add_option("--generators", z.generators, "template points per dyadic shell")->capture_default_str();
    sub->add_option("--levels", z.levels, "dyadic levels of the template")->capture_default_str();
  };
  auto* zoom = app.add_subcommand("zoom", "zoom sequence, cascade and scale stability");
  add_zoom(zoom, zm);
  zoom->add_option("--viewpoint", zm.viewpoint, "pixel index for the viewpoint-stability table");
  zoom->add_option("--lattice-step", zm.lattice_step, "lattice template step for --viewpoint")->capture_default_str();
  auto* foveal = app.add_subcommand("foveal", "foveal maps and their fixed-point check");
  add_zoom(foveal, fv);

  auto* pansu = app.add_subcommand("pansu", "Pansu-style derivative residual");
  add_structure_options(pansu, pa.s, true);
  pansu->add_option("--map", pa.map, "euclid: linear | smooth; heis: shear | translation")->required();
  pansu->add_option("--samples", pa.samples, "unit-ball sample size")->capture_default_str();
  pansu->add_option("--schedule", pa.schedule, "a:b for 2^-a..2^-b, or a comma list")->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->configurable();

  int code = 0;
  std::string error;
  std::vector<std::string> outputs;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    mc::set_jobs(g.jobs);
    Result r;
    if (sub == "validate") r = cmd_validate(space_path);
    else if (sub == "quality") r = cmd_quality(relation_path);
    else if (sub == "generalize") r = cmd_generalize(relation_path, gen_eps, gen_mu);
    else if (sub == "gh") r = cmd_gh(gh_x, gh_y, budget, classical, gh_method);
    else if (sub == "axioms") r = cmd_axioms(ax, g.seed);
    else if (sub == "zoom") r = cmd_zoom(zm, g.seed);
    else if (sub == "foveal") r = cmd_foveal(fv, g.seed);
    else if (sub == "pansu") r = cmd_pansu(pa, g.seed);
    write_text(g.out, g.csv ? mc::io::to_csv(r.csv_rows) : r.report.dump(2) + "\n");
    outputs.push_back(g.out.empty() ? "<stdout>" : g.out);
    code = r.code;
  } catch (const mc::StructuralError& e) {
    error = e.what();
    code = 2;
  } catch (const mc::ArgumentError& e) {
    error = e.what();
    code = 3;
  } catch (const std::exception& e) {
    error = e.what();
    code = 1;
  }
  if (!error.empty()) std::cerr << "mc " << sub << ": " << error << "\n";

  std::string config_path, config_bytes;
  if (cfg->count() > 0) {
    config_path = cfg->as<std::string>();
    std::ifstream in(config_path, std::ios::binary);
    config_bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  json manifest = {{"tool", "mc"},
                   {"version", kVersion},
                   {"command_line", std::vector<std::string>(argv, argv + argc)},
                   {"subcommand", sub},
                   {"config", config_path.empty() ? json(nullptr) : json(config_path)},
                   {"config_digest", fnv1a(config_bytes)},
                   {"seed", g.seed},
                   {"jobs", mc::jobs()},
                   {"started_at", started},
                   {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                   {"outputs", outputs},
                   {"exit_code", code},
                   {"error", error.empty() ? json(nullptr) : json(error)}};
  try {
    if (g.out.empty())
      std::cerr << manifest.dump() << "\n";
    else
      write_text(g.out + ".manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "mc: cannot write manifest: " << e.what() << "\n";
    if (code == 0) code = 1;
  }
  return code;
}
