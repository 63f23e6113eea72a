#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// Drives the installed command line binary end to end.

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd =
      std::string(SL2FLOW_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) {
    res.output.append(buf, got);
  }
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// Column of a schema-tagged CSV body (skips '#' comments and the header).
std::vector<double> csv_column(const std::string& csv, std::size_t col) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    for (std::size_t c = 0; std::getline(ls, tok, ','); ++c) {
      if (c == col) out.push_back(std::strtod(tok.c_str(), nullptr));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("classify a rigid rotation") {
  const RunResult r =
      run("classify --kappa 1 --ambient \"1,0,0,1;0,-2,2,0\"");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"kind\": \"RigidRotation\""));
  CHECK(contains(r.output, "\"x3\": 4"));
}

TEST_CASE("classify the pressureless shear line") {
  const RunResult r =
      run("classify --kappa 0 --ambient \"1,0,0,1;0,0,2,0\"");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"kind\": \"UnboundedBothEnds\""));
  CHECK(contains(r.output, "\"pressureless\": true"));
}

TEST_CASE("parse and manifold errors map to exit codes") {
  CHECK(run("classify --kappa 1 --ambient \"1,0,0;0,0,2,0\"").exit_code == 3);
  CHECK(run("classify --kappa 1 --ambient \"nope\"").exit_code == 3);
  CHECK(run("classify --kappa 1").exit_code == 3);  // no initial data
  CHECK(run("classify --kappa 1 --ambient \"1,0,0,1;0,0,2,0\" "
            "--preset rigid-rotation")
            .exit_code == 3);  // two initial forms
  // det A = 2: off the constraint set.
  CHECK(run("classify --kappa 1 --ambient \"2,0,0,1;0,0,0,0\"").exit_code ==
        2);
}

TEST_CASE("simulate: rigid rotation keeps |A|^2 = 2") {
  const RunResult r =
      run("simulate --preset rigid-rotation --t1 10 --dt 0.25");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "# sl2flow.trajectory.v1"));
  const auto norms = csv_column(r.output, 9);
  REQUIRE(norms.size() == 41);
  for (double v : norms) CHECK(std::abs(v - 2.0) < 1e-9);
}

TEST_CASE("simulate: pressureless preset has a zero multiplier column") {
  const RunResult r =
      run("simulate --preset pressureless-oscillator --t1 12.5");
  CHECK(r.exit_code == 0);
  for (double lam : csv_column(r.output, 10)) {
    CHECK(std::abs(lam) < 1e-10);
  }
}

TEST_CASE("simulate: homoclinic preset shrinks toward the disk both ways") {
  const RunResult r =
      run("simulate --preset homoclinic --t0 -20 --t1 20 --dt 0.5");
  CHECK(r.exit_code == 0);
  const auto norms = csv_column(r.output, 9);
  REQUIRE(norms.size() == 81);
  CHECK(norms.front() < 2.05);   // |A|^2 -> 2 backward
  CHECK(norms.back() < 2.05);    // and forward
  CHECK(norms[40] == doctest::Approx(4.0));  // q1 = 1 at launch
  for (double v : norms) CHECK(v >= 2.0 - 1e-9);
}

TEST_CASE("simulate: reduced formulations agree with ambient") {
  const std::string data = "--kappa 1 --reduced \"1,0,0;0.3,1,2;x2nonzero\"";
  const RunResult amb = run("simulate " + data + " --t1 5 --dt 1");
  const RunResult red =
      run("simulate " + data + " --t1 5 --dt 1 --formulation hamsys2");
  CHECK(amb.exit_code == 0);
  CHECK(red.exit_code == 0);
  const auto a = csv_column(amb.output, 1);
  const auto b = csv_column(red.output, 1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) < 1e-6);
  }
}

TEST_CASE("classify accepts chart and reduced input forms") {
  // Chart point of the rotating disk: x = 0, p = (0, 0, 4).
  const RunResult rc = run("classify --kappa 1 --chart \"0,0,0;0,0,4\"");
  CHECK(rc.exit_code == 0);
  CHECK(contains(rc.output, "\"kind\": \"RigidRotation\""));

  const RunResult rr = run(
      "classify --kappa 1 --reduced \"1,0,0;0,1,3;x2nonzero\"");
  CHECK(rr.exit_code == 0);
  CHECK(contains(rr.output, "\"kind\": \"Rigid\""));
}

TEST_CASE("forcing the wrong reduced regime is a usage error") {
  const RunResult r = run(
      "simulate --kappa 1 --reduced \"1,0,0;0,1,3;x2nonzero\" "
      "--formulation hamsys3 --t1 1");
  CHECK(r.exit_code == 3);
}

TEST_CASE("simulate: blown tolerance budget exits with code 4") {
  const RunResult r = run(
      "simulate --preset periodic-crossing --t1 100 --rtol 1e-2 --atol 1e-2");
  CHECK(r.exit_code == 4);
}

TEST_CASE("simulate output is byte-deterministic") {
  const std::string args =
      "simulate --preset periodic-crossing --t1 7 --dt 0.35";
  const RunResult r1 = run(args);
  const RunResult r2 = run(args);
  CHECK(r1.exit_code == 0);
  CHECK(r1.output == r2.output);
}

TEST_CASE("portrait figure presets carry the expected topology") {
  const RunResult r = run("portrait --figure 3 --format json");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"homoclinic\""));
  CHECK(contains(r.output, "\"point\""));
  CHECK(contains(r.output, "\"closed\""));

  const RunResult r6 = run("portrait --figure 6 --format json");
  CHECK(contains(r6.output, "\"equilibrium-line\""));
}

TEST_CASE("portrait reports empty level sets per energy, not fatally") {
  const RunResult r = run(
      "portrait --hamiltonian h0 --kappa 1 --x3 4 --energy 4.2 --energy 6 "
      "--format json");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"error\""));     // 4.2 sits below the wells
  CHECK(contains(r.output, "\"closed\""));    // 6 encloses everything
}

TEST_CASE("portrait csv lists curve points") {
  const RunResult r = run(
      "portrait --hamiltonian htilde --kappa 1 --x2 1 --x3 0 --energy 3 "
      "--samples 32 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "# sl2flow.portrait.v1"));
  CHECK(contains(r.output, "closed"));
}

TEST_CASE("fields on the boundary have zero pressure") {
  const RunResult r = run(
      "fields --kappa 0 --ambient \"1,0,0,1;1,0,0,-1\" --at \"1,0\" --at "
      "\"0,1\" --format csv");
  CHECK(r.exit_code == 0);
  const auto p = csv_column(r.output, 6);
  REQUIRE(p.size() == 2);
  CHECK(std::abs(p[0]) < 1e-12);
  CHECK(std::abs(p[1]) < 1e-12);
}

TEST_CASE("fields evaluates on the evolved state when t1 is given") {
  // Shear line: at t = 1 the boundary point A(1)(1,0) = (1,2) has p = 0.
  const RunResult r = run(
      "fields --preset shear-geodesic --t1 1 --at \"1,2\" --format csv");
  CHECK(r.exit_code == 0);
  const auto p = csv_column(r.output, 6);
  REQUIRE(p.size() == 1);
  CHECK(std::abs(p[0]) < 1e-10);
}

TEST_CASE("fields json reports divergence checks") {
  const RunResult r = run(
      "fields --preset rigid-rotation --grid 4 --format json");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"div_u\""));
  CHECK(contains(r.output, "\"max_boundary_bn\""));
}

TEST_CASE("verify runs a single suite deterministically") {
  const RunResult r1 = run("verify --suite algebra --seed 7");
  const RunResult r2 = run("verify --suite algebra --seed 7");
  CHECK(r1.exit_code == 0);
  CHECK(contains(r1.output, "[PASS]"));
  CHECK(contains(r1.output, "algebra"));
  CHECK(r1.output == r2.output);

  CHECK(run("verify --suite nosuchsuite").exit_code == 3);
}

TEST_CASE("verify json output carries per-criterion measurements") {
  const RunResult r =
      run("verify --suite charts --seed 3 --format json");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"all_passed\": true"));
  CHECK(contains(r.output, "\"measured\""));
  CHECK(contains(r.output, "\"checks\""));
}

TEST_CASE("config file fills unset flags and flags win on conflict") {
  const std::string dir = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp");
  const std::string cfg_path = dir + "/sl2flow_test_cfg.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << "{\"kappa\": 1.0, \"preset\": \"rigid-rotation\", "
           "\"format\": \"json\"}\n";
  }
  const RunResult from_cfg = run("classify --config " + cfg_path);
  CHECK(from_cfg.exit_code == 0);
  CHECK(contains(from_cfg.output, "\"kind\": \"RigidRotation\""));

  // Explicit flag overrides the config value.
  const RunResult flag_wins =
      run("classify --config " + cfg_path + " --kappa 0");
  CHECK(flag_wins.exit_code == 0);
  CHECK(contains(flag_wins.output, "\"kind\": \"RigidRotation\""));
  CHECK(contains(flag_wins.output, "\"kappa\": 0"));
  std::remove(cfg_path.c_str());
}

TEST_CASE("output file writing") {
  const std::string dir = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp");
  const std::string out_path = dir + "/sl2flow_test_out.csv";
  const RunResult r = run("simulate --preset shear-geodesic --t1 2 --dt 1 "
                          "--out " + out_path);
  CHECK(r.exit_code == 0);
  CHECK(r.output.empty());
  std::ifstream f(out_path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(contains(ss.str(), "# sl2flow.trajectory.v1"));
  std::remove(out_path.c_str());
}
