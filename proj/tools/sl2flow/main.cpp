// sl2flow: simulate, classify and verify affine fluid motions whose
// deformation gradient moves in the unit-determinant matrix group.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "presets.hpp"
#include "sl2flow/asymptotics.hpp"
#include "sl2flow/charts.hpp"
#include "sl2flow/classify.hpp"
#include "sl2flow/dynamics.hpp"
#include "sl2flow/errors.hpp"
#include "sl2flow/physics.hpp"
#include "sl2flow/verify.hpp"
#include "wire.hpp"

namespace sl2flow::cli {
namespace {

using nlohmann::json;

// ---- logging (SL2FLOW_LOG = error | warn | info | debug) ------------------

int log_threshold() {
  static const int level = [] {
    const char* env = std::getenv("SL2FLOW_LOG");
    if (!env) return 1;
    const std::string v = env;
    if (v == "error") return 0;
    if (v == "warn") return 1;
    if (v == "info") return 2;
    if (v == "debug") return 3;
    return 1;
  }();
  return level;
}

void logmsg(int level, const char* tag, const std::string& msg) {
  if (level <= log_threshold()) {
    std::fprintf(stderr, "sl2flow [%s] %s\n", tag, msg.c_str());
  }
}

// ---- shared configuration --------------------------------------------------

struct Options {
  std::string config_path;
  double kappa = 0.0;
  std::string ambient, chart, reduced, preset;
  std::string formulation = "auto";
  double t0 = 0.0, t1 = 10.0, dt = 0.0;
  double rtol = 1e-12, atol = 1e-13;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 1;
  std::vector<std::string> suites;
  double horizon = 1000.0;
  // portrait
  std::string hamiltonian = "h0";
  double x2 = 0.0, x3 = 0.0;
  std::vector<double> energies;
  std::size_t samples = 512;
  double q1max = 5.0;
  int figure = 0;
  // fields
  double c0 = std::numeric_limits<double>::quiet_NaN();
  int grid = 0;
  std::vector<std::string> at_points;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    throw ParseError("config file '" + path + "': " + e.what());
  }
  if (!cfg.is_object()) throw ParseError("config file must hold a JSON object");
  return cfg;
}

// Config values fill in whatever the command line left untouched. Keys that
// have no matching flag on the subcommand are ignored.
template <typename T>
void merge(CLI::App* cmd, const json& cfg, const std::string& key, T& var) {
  const CLI::Option* opt = cmd->get_option_no_throw("--" + key);
  if (opt != nullptr && opt->count() == 0 && cfg.contains(key)) {
    try {
      var = cfg.at(key).get<T>();
    } catch (const std::exception& e) {
      throw ParseError("config key '" + key + "': " + e.what());
    }
  }
}

void apply_config(CLI::App* cmd, Options& o) {
  if (o.config_path.empty()) return;
  const json cfg = load_config(o.config_path);
  merge(cmd, cfg, "kappa", o.kappa);
  merge(cmd, cfg, "ambient", o.ambient);
  merge(cmd, cfg, "chart", o.chart);
  merge(cmd, cfg, "reduced", o.reduced);
  merge(cmd, cfg, "preset", o.preset);
  merge(cmd, cfg, "formulation", o.formulation);
  merge(cmd, cfg, "t0", o.t0);
  merge(cmd, cfg, "t1", o.t1);
  merge(cmd, cfg, "dt", o.dt);
  merge(cmd, cfg, "rtol", o.rtol);
  merge(cmd, cfg, "atol", o.atol);
  merge(cmd, cfg, "format", o.format);
  merge(cmd, cfg, "out", o.out);
  merge(cmd, cfg, "seed", o.seed);
  merge(cmd, cfg, "suite", o.suites);
  merge(cmd, cfg, "horizon", o.horizon);
  merge(cmd, cfg, "hamiltonian", o.hamiltonian);
  merge(cmd, cfg, "x2", o.x2);
  merge(cmd, cfg, "x3", o.x3);
  merge(cmd, cfg, "energy", o.energies);
  merge(cmd, cfg, "samples", o.samples);
  merge(cmd, cfg, "q1max", o.q1max);
  merge(cmd, cfg, "figure", o.figure);
  merge(cmd, cfg, "c0", o.c0);
  merge(cmd, cfg, "grid", o.grid);
  merge(cmd, cfg, "at", o.at_points);
  logmsg(3, "debug", "merged config from " + o.config_path);
}

void emit(const std::string& content, const std::string& out) {
  if (out.empty()) {
    std::fputs(content.c_str(), stdout);
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error("cannot open output file '" + out + "'");
  f << content;
  logmsg(2, "info", "wrote " + out);
}

// ---- initial data -----------------------------------------------------------

struct Initial {
  PhaseState state;
  double kappa = 0.0;
  std::string source;
};

Initial resolve_initial(CLI::App* cmd, const Options& o) {
  const int given = (o.ambient.empty() ? 0 : 1) + (o.chart.empty() ? 0 : 1) +
                    (o.reduced.empty() ? 0 : 1) + (o.preset.empty() ? 0 : 1);
  if (given != 1) {
    throw ParseError(
        "exactly one of --ambient, --chart, --reduced, --preset is required");
  }
  Initial init;
  init.kappa = o.kappa;
  if (!o.ambient.empty()) {
    init.state = parse_ambient(o.ambient);
    init.source = "ambient";
  } else if (!o.chart.empty()) {
    init.state = ambient_from_chart(parse_chart(o.chart));
    init.source = "chart";
  } else if (!o.reduced.empty()) {
    init.state = reduced_to_ambient(parse_reduced(o.reduced));
    init.source = "reduced";
  } else {
    const Preset& p = find_preset(o.preset);
    init.state = p.make();
    init.source = std::string("preset:") + p.name;
    if (cmd->count("--kappa") == 0) init.kappa = p.kappa;
  }

  const double scale =
      std::max(1.0, 0.5 * (norm_sq(init.state.A) + norm_sq(init.state.B)));
  if (std::abs(det2(init.state.A) - 1.0) > 1e-9 ||
      std::abs(tangent_defect(init.state.A, init.state.B)) > 1e-9 * scale) {
    throw NotOnManifold("initial data is not a valid state (det A != 1 or "
                        "B not tangent)");
  }
  if (init.kappa < 0.0) throw ParseError("kappa must be nonnegative");
  return init;
}

std::vector<double> sample_times(const Options& o) {
  if (o.t1 < o.t0) throw ParseError("need t0 <= t1");
  double dt = o.dt;
  if (dt == 0.0) dt = (o.t1 - o.t0) / 200.0;
  if (dt <= 0.0) throw ParseError("dt must be positive");
  std::vector<double> times;
  const double n = std::floor((o.t1 - o.t0) / dt + 1e-9);
  for (double k = 0; k <= n; ++k) times.push_back(o.t0 + k * dt);
  if (times.empty() || times.back() < o.t1 - 1e-9 * std::max(1.0, dt)) {
    times.push_back(o.t1);
  }
  return times;
}

json invariants_json(const Invariants& inv) {
  return json{{"kappa", inv.kappa},
              {"x1", inv.X1},
              {"x2", inv.X2},
              {"x3", inv.X3}};
}

// ---- classify ---------------------------------------------------------------

const char* to_string(CriticalPointType t) {
  switch (t) {
    case CriticalPointType::Minimum: return "minimum";
    case CriticalPointType::Saddle: return "saddle";
    case CriticalPointType::Center: return "center";
    case CriticalPointType::Degenerate: return "degenerate";
  }
  return "?";
}

int cmd_classify(CLI::App* cmd, Options& o) {
  apply_config(cmd, o);
  const Initial init = resolve_initial(cmd, o);
  const OrbitClass oc = classify(init.state, init.kappa);
  const Invariants inv = invariants_of(init.state, init.kappa);

  json out;
  out["schema"] = "sl2flow.classification.v1";
  out["source"] = init.source;
  out["kind"] = sl2flow::to_string(oc.kind);
  out["pressureless"] = oc.pressureless;
  out["passes_through_so2"] = oc.passes_through_so2;
  out["invariants"] = invariants_json(inv);
  out["norm_a0_sq"] = norm_sq(init.state.A);
  out["multiplier0"] = lagrange_multiplier(init.state, init.kappa);
  // Positive interior pressure decreasing toward the vacuum boundary; the
  // sign is preserved by the motion.
  out["taylor_sign"] = lagrange_multiplier(init.state, init.kappa) > 0.0;
  out["boundary_proximity_warnings"] = oc.warnings;
  out["critical_points"] = json::array();
  try {
    for (const auto& cp : critical_points(init.kappa, inv.X2, inv.X3)) {
      out["critical_points"].push_back(
          json{{"q1", cp.q1}, {"type", to_string(cp.type)}});
    }
  } catch (const NoCriticalPoint&) {
    out["critical_points_note"] = "level sets unbounded: no critical points";
  }
  emit(out.dump(2) + "\n", o.out);
  return 0;
}

// ---- simulate ---------------------------------------------------------------

Trajectory run_simulation(const Initial& init, const Options& o,
                          const std::vector<double>& times) {
  IntegrateOptions io;
  io.rtol = o.rtol;
  io.atol = o.atol;

  std::string mode = o.formulation;
  if (mode == "auto") mode = "ambient";
  if (mode == "ambient") return integrate(init.state, init.kappa, times, io);
  if (mode == "hamsys") {
    return integrate_chart(chart_from_ambient(init.state), init.kappa, times,
                           io);
  }
  if (mode == "hamsys2" || mode == "hamsys3") {
    const ReducedState rs = ambient_to_reduced(init.state);
    const bool want_nonzero = mode == "hamsys2";
    if ((rs.regime == Regime::X2NonZero) != want_nonzero) {
      throw ParseError("initial data is in the wrong regime for " + mode);
    }
    return integrate_reduced(rs, init.kappa, times, io);
  }
  throw ParseError("unknown formulation '" + o.formulation + "'");
}

int cmd_simulate(CLI::App* cmd, Options& o) {
  apply_config(cmd, o);
  const Initial init = resolve_initial(cmd, o);
  const auto times = sample_times(o);
  logmsg(2, "info",
         "integrating " + init.source + " over [" + num(times.front()) + ", " +
             num(times.back()) + "], " + std::to_string(times.size()) +
             " samples");
  const Trajectory traj = run_simulation(init, o, times);

  if (o.format == "csv") {
    std::string csv;
    csv += "# sl2flow.trajectory.v1\n";
    csv +=
        "t,a11,a12,a21,a22,adot11,adot12,adot21,adot22,norm_a_sq,lambda,"
        "drift_x1,drift_x2,drift_x3,det_defect,semi_major,semi_minor,"
        "orientation\n";
    for (const auto& smp : traj.samples) {
      const EllipseGeometry e = ellipse_of(smp.state.A, 1e-6);
      const Mat2& a = smp.state.A;
      const Mat2& b = smp.state.B;
      const double cols[] = {smp.t,
                             a.a11,
                             a.a12,
                             a.a21,
                             a.a22,
                             b.a11,
                             b.a12,
                             b.a21,
                             b.a22,
                             norm_sq(a),
                             smp.lambda,
                             smp.invariant_drift[0],
                             smp.invariant_drift[1],
                             smp.invariant_drift[2],
                             smp.det_defect,
                             e.semi_major,
                             e.semi_minor,
                             e.orientation};
      for (std::size_t c = 0; c < std::size(cols); ++c) {
        csv += (c ? "," : "") + num(cols[c]);
      }
      csv += '\n';
    }
    emit(csv, o.out);
  } else if (o.format == "json") {
    json out;
    out["schema"] = "sl2flow.trajectory.v1";
    out["kappa"] = init.kappa;
    out["source"] = init.source;
    out["closed_form"] = traj.closed_form;
    out["invariants"] = invariants_json(traj.initial);
    out["samples"] = json::array();
    for (const auto& smp : traj.samples) {
      const EllipseGeometry e = ellipse_of(smp.state.A, 1e-6);
      out["samples"].push_back(json{
          {"t", smp.t},
          {"a", {smp.state.A.a11, smp.state.A.a12, smp.state.A.a21,
                 smp.state.A.a22}},
          {"adot", {smp.state.B.a11, smp.state.B.a12, smp.state.B.a21,
                    smp.state.B.a22}},
          {"norm_a_sq", norm_sq(smp.state.A)},
          {"lambda", smp.lambda},
          {"drift", {smp.invariant_drift[0], smp.invariant_drift[1],
                     smp.invariant_drift[2]}},
          {"det_defect", smp.det_defect},
          {"semi_major", e.semi_major},
          {"semi_minor", e.semi_minor},
          {"orientation", e.orientation},
      });
    }
    emit(out.dump(2) + "\n", o.out);
  } else {
    throw ParseError("format must be csv or json");
  }
  return 0;
}

// ---- portrait ---------------------------------------------------------------

struct FigurePreset {
  ReducedHamiltonian which;
  double kappa, x2, x3;
  std::vector<double> energies;
};

FigurePreset figure_preset(int figure) {
  const double emin1 = h_tilde(std::pow(2.0, -0.25), 0.0, 1.0, 0.0, 1.0);
  const double emin3 = 4.0 * std::sqrt(2.0) - 1.0;
  switch (figure) {
    case 1:
      return {ReducedHamiltonian::Htilde, 1.0, 1.0, 0.0,
              {emin1, emin1 + 0.5, emin1 + 1.0, emin1 + 2.0}};
    case 2:
      return {ReducedHamiltonian::Htilde, 0.0, 1.0, 0.0, {0.5, 1.0, 2.0}};
    case 3:
      return {ReducedHamiltonian::H0, 1.0, 0.0, 4.0,
              {0.5 * (emin3 + 5.0), 5.0, 6.0}};
    case 4:
      return {ReducedHamiltonian::H0, 1.0, 0.0, 2.0, {2.0, 2.5, 3.0, 4.0}};
    case 5:
      return {ReducedHamiltonian::H0, 0.0, 0.0, 2.0, {0.6, 1.0, 1.5}};
    case 6:
      return {ReducedHamiltonian::H0, 0.0, 0.0, 0.0, {0.0, 0.5, 1.0}};
    default:
      throw ParseError("figure must be 1..6");
  }
}

int cmd_portrait(CLI::App* cmd, Options& o) {
  apply_config(cmd, o);
  ReducedHamiltonian which;
  double kappa = o.kappa, x2 = o.x2, x3 = o.x3;
  std::vector<double> energies = o.energies;
  if (o.figure != 0) {
    const FigurePreset fp = figure_preset(o.figure);
    which = fp.which;
    kappa = fp.kappa;
    x2 = fp.x2;
    x3 = fp.x3;
    if (energies.empty()) energies = fp.energies;
  } else if (o.hamiltonian == "htilde") {
    which = ReducedHamiltonian::Htilde;
  } else if (o.hamiltonian == "h0") {
    which = ReducedHamiltonian::H0;
  } else {
    throw ParseError("hamiltonian must be htilde or h0");
  }
  if (energies.empty()) {
    throw ParseError("at least one --energy is required");
  }

  LevelCurveOptions lco;
  lco.samples_per_branch = o.samples;
  lco.q1_view = o.q1max;

  json out;
  out["schema"] = "sl2flow.portrait.v1";
  out["hamiltonian"] = which == ReducedHamiltonian::Htilde ? "htilde" : "h0";
  out["kappa"] = kappa;
  out["x2"] = x2;
  out["x3"] = x3;
  out["levels"] = json::array();
  std::string csv = "# sl2flow.portrait.v1\nenergy,curve,topology,q1,xi1\n";

  for (double energy : energies) {
    json level;
    level["energy"] = energy;
    try {
      const LevelSet ls = level_curve(which, kappa, x2, x3, energy, lco);
      level["curves"] = json::array();
      for (std::size_t c = 0; c < ls.curves.size(); ++c) {
        const auto& curve = ls.curves[c];
        json jc;
        jc["topology"] = sl2flow::to_string(curve.topology);
        jc["points"] = json::array();
        for (const auto& p : curve.points) {
          jc["points"].push_back({p[0], p[1]});
          csv += num(energy) + "," + std::to_string(c) + "," +
                 sl2flow::to_string(curve.topology) + "," + num(p[0]) + "," +
                 num(p[1]) + "\n";
        }
        level["curves"].push_back(std::move(jc));
      }
    } catch (const EmptyLevelSet& e) {
      // Reported per curve, not fatal.
      level["error"] = e.what();
      logmsg(1, "warn", std::string(e.what()));
    }
    out["levels"].push_back(std::move(level));
  }

  if (o.format == "json" || o.format == "csv") {
    emit(o.format == "json" ? out.dump(2) + "\n" : csv, o.out);
  } else {
    throw ParseError("format must be csv or json");
  }
  return 0;
}

// ---- fields -----------------------------------------------------------------

int cmd_fields(CLI::App* cmd, Options& o) {
  if (cmd->count("--t1") == 0) o.t1 = 0.0;  // fields default to the initial state
  apply_config(cmd, o);
  const Initial init = resolve_initial(cmd, o);
  double c0 = o.c0;
  if (std::isnan(c0)) c0 = std::sqrt(init.kappa);

  PhaseState state = init.state;
  if (o.t1 != 0.0) {
    // Evaluate the fields on the evolved state.
    IntegrateOptions io;
    io.rtol = o.rtol;
    io.atol = o.atol;
    state = integrate(init.state, init.kappa, {o.t1}, io).samples.back().state;
  }

  std::vector<Vec2> points;
  for (const auto& coords : o.at_points) {
    const auto v = parse_reals(coords, 2, "--at point");
    points.push_back({v[0], v[1]});
  }
  int grid = o.grid;
  if (points.empty() && grid == 0) grid = 16;
  if (grid > 0) {
    const EllipseGeometry e = ellipse_of(state.A, 1e-6);
    const double reach = 1.1 * e.semi_major;
    for (int iy = 0; iy < grid; ++iy) {
      for (int ix = 0; ix < grid; ++ix) {
        const double fx = grid > 1 ? static_cast<double>(ix) / (grid - 1) : 0.5;
        const double fy = grid > 1 ? static_cast<double>(iy) / (grid - 1) : 0.5;
        points.push_back({-reach + 2.0 * reach * fx, -reach + 2.0 * reach * fy});
      }
    }
  }

  const DivergenceReport div = divergence_checks(state, init.kappa, c0, 1000);

  if (o.format == "csv") {
    std::string csv = "# sl2flow.fields.v1\nx,y,u1,u2,b1,b2,p,inside\n";
    for (const auto& pt : points) {
      const FieldSample fs = fields_at(state, init.kappa, c0, pt);
      csv += num(pt[0]) + "," + num(pt[1]) + "," + num(fs.velocity[0]) + "," +
             num(fs.velocity[1]) + "," + num(fs.magnetic[0]) + "," +
             num(fs.magnetic[1]) + "," + num(fs.pressure) + "," +
             (fs.inside ? "1" : "0") + "\n";
    }
    emit(csv, o.out);
  } else if (o.format == "json") {
    json out;
    out["schema"] = "sl2flow.fields.v1";
    out["kappa"] = init.kappa;
    out["c0"] = c0;
    out["t"] = o.t1;
    out["div_u"] = div.div_u;
    out["div_b"] = div.div_b;
    out["max_boundary_bn"] = div.max_boundary_bn;
    const EllipseGeometry e = ellipse_of(state.A, 1e-6);
    out["ellipse"] = json{{"semi_major", e.semi_major},
                          {"semi_minor", e.semi_minor},
                          {"orientation", e.orientation}};
    out["samples"] = json::array();
    for (const auto& pt : points) {
      const FieldSample fs = fields_at(state, init.kappa, c0, pt);
      out["samples"].push_back(json{{"x", pt[0]},
                                    {"y", pt[1]},
                                    {"u", {fs.velocity[0], fs.velocity[1]}},
                                    {"b", {fs.magnetic[0], fs.magnetic[1]}},
                                    {"p", fs.pressure},
                                    {"inside", fs.inside}});
    }
    emit(out.dump(2) + "\n", o.out);
  } else {
    throw ParseError("format must be csv or json");
  }
  return 0;
}

// ---- verify -----------------------------------------------------------------

int cmd_verify(CLI::App* cmd, Options& o) {
  apply_config(cmd, o);
  VerifyOptions vo;
  vo.seed = o.seed;
  vo.horizon = o.horizon;
  vo.suites = o.suites;
  for (const auto& s : vo.suites) {
    const auto names = acceptance_suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw ParseError("unknown suite '" + s + "'");
    }
  }
  const auto results = run_acceptance(vo);

  bool all_passed = true;
  for (const auto& r : results) all_passed = all_passed && r.passed;

  if (o.format == "json") {
    json out;
    out["schema"] = "sl2flow.verify.v1";
    out["seed"] = vo.seed;
    out["horizon"] = vo.horizon;
    out["all_passed"] = all_passed;
    out["results"] = json::array();
    for (const auto& r : results) {
      out["results"].push_back(json{{"id", r.id},
                                    {"name", r.name},
                                    {"checks", r.checks},
                                    {"passed", r.passed},
                                    {"measured", r.measured},
                                    {"threshold", r.threshold},
                                    {"details", r.details}});
    }
    emit(out.dump(2) + "\n", o.out);
  } else {
    std::string text;
    for (const auto& r : results) {
      char line[1024];
      std::snprintf(line, sizeof line,
                    "[%s] %2d %-17s measured=%.3e threshold=%.3e  %s\n",
                    r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.measured, r.threshold, r.details.c_str());
      text += line;
    }
    text += all_passed ? "ACCEPTED\n" : "REJECTED\n";
    emit(text, o.out);
  }
  return all_passed ? 0 : 1;
}

// ---- wiring -----------------------------------------------------------------

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path,
                  "JSON file mirroring the flags (flags win on conflict)");
  cmd->add_option("--kappa", o.kappa, "magnetic parameter, kappa = c0^2 >= 0");
  cmd->add_option("--ambient", o.ambient,
                  "state 'a11,a12,a21,a22;b11,b12,b21,b22' (row-major)");
  cmd->add_option("--chart", o.chart, "chart point 'x1,x2,x3;p1,p2,p3'");
  cmd->add_option("--reduced", o.reduced,
                  "reduced state 'q1,q2,q3;xi1,xi2,xi3;x2nonzero|x2zero'");
  cmd->add_option("--preset", o.preset, "named initial data (see docs)");
  cmd->add_option("--format", o.format, "output format: csv or json");
  cmd->add_option("--out", o.out, "output file (default stdout)");
}

}  // namespace
}  // namespace sl2flow::cli

int main(int argc, char** argv) {
  using namespace sl2flow;
  using namespace sl2flow::cli;

  CLI::App app{"affine fluid motion in the unit-determinant matrix group"};
  app.require_subcommand(1);
  Options o;

  auto* c_classify = app.add_subcommand(
      "classify", "classify an orbit from its initial data");
  add_common(c_classify, o);

  auto* c_simulate =
      app.add_subcommand("simulate", "integrate a trajectory and emit samples");
  add_common(c_simulate, o);
  c_simulate->add_option("--formulation", o.formulation,
                         "ambient | hamsys | hamsys2 | hamsys3 | auto");
  c_simulate->add_option("--t0", o.t0, "first output time (data is at t = 0)");
  c_simulate->add_option("--t1", o.t1, "last output time");
  c_simulate->add_option("--dt", o.dt, "output spacing (default span/200)");
  c_simulate->add_option("--rtol", o.rtol, "relative tolerance");
  c_simulate->add_option("--atol", o.atol, "absolute tolerance");

  auto* c_portrait = app.add_subcommand(
      "portrait", "level curves of the reduced radial motion");
  add_common(c_portrait, o);
  c_portrait->add_option("--hamiltonian", o.hamiltonian, "htilde | h0");
  c_portrait->add_option("--x2", o.x2, "rotational invariant X2");
  c_portrait->add_option("--x3", o.x3, "rotational invariant X3");
  c_portrait->add_option("--energy", o.energies, "energy level (repeatable)");
  c_portrait->add_option("--samples", o.samples, "points per branch");
  c_portrait->add_option("--q1max", o.q1max, "viewing window for open branches");
  c_portrait->add_option("--figure", o.figure,
                         "canonical portrait 1..6 (overrides parameters)");

  auto* c_fields = app.add_subcommand(
      "fields", "velocity, magnetic field and pressure of a state");
  add_common(c_fields, o);
  c_fields->add_option("--c0", o.c0, "magnetic amplitude (default sqrt(kappa))");
  c_fields->add_option("--t1", o.t1, "evaluate on the state evolved to t1");
  c_fields->add_option("--rtol", o.rtol, "relative tolerance");
  c_fields->add_option("--atol", o.atol, "absolute tolerance");
  c_fields->add_option("--grid", o.grid, "sample an N x N grid over the ellipse");
  c_fields->add_option("--at", o.at_points, "sample point 'x,y' (repeatable)");

  auto* c_verify = app.add_subcommand(
      "verify", "run the acceptance criteria and report pass/fail");
  add_common(c_verify, o);
  c_verify->add_option("--seed", o.seed, "seed for the randomized suites");
  c_verify->add_option("--suite", o.suites, "criterion name filter (repeatable)");
  c_verify->add_option("--horizon", o.horizon,
                       "time horizon for the asymptote suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (c_classify->parsed()) return cmd_classify(c_classify, o);
    if (c_simulate->parsed()) return cmd_simulate(c_simulate, o);
    if (c_portrait->parsed()) return cmd_portrait(c_portrait, o);
    if (c_fields->parsed()) return cmd_fields(c_fields, o);
    if (c_verify->parsed()) return cmd_verify(c_verify, o);
  } catch (const cli::ParseError& e) {
    logmsg(0, "error", e.what());
    return 3;
  } catch (const NotOnManifold& e) {
    logmsg(0, "error", e.what());
    return 2;
  } catch (const ToleranceExceeded& e) {
    logmsg(0, "error", e.what());
    return 4;
  } catch (const Error& e) {
    logmsg(0, "error", e.what());
    return 5;
  } catch (const std::exception& e) {
    logmsg(0, "error", e.what());
    return 10;
  }
  return 0;
}
