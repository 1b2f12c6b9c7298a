#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "topowork/cli.hpp"
#include "topowork/dynamics.hpp"
#include "topowork/geometry.hpp"

using namespace topowork;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json summary() const { return json::parse(out); }
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "topowork");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "topowork_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<std::string> data_lines(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("chern in the topological phase") {
  const Result r = invoke({"chern", "--gamma", "0.5", "--nu", "1", "--alpha", "1", "--grid", "256"});
  REQUIRE(r.code == 0);
  const json s = r.summary();
  CHECK(s["subcommand"] == "chern");
  CHECK(s["rounded"] == 4);
  CHECK(s["c1_flux"] == 4);
  CHECK(s["c1_lattice"] == 4);
  CHECK(s["winding"] == -2);
  CHECK(s["residual"].get<double>() < 1e-6);
  CHECK(s["residuals"]["c1_flux"].get<double>() < 1e-6);
  CHECK(r.out.find('\n') == r.out.size() - 1);  // one line
}

TEST_CASE("chern on other representations and bands") {
  const Result r = invoke({"chern", "--grid", "96", "--two-j", "3", "--band", "1.5"});
  REQUIRE(r.code == 0);
  CHECK(r.summary()["c1_lattice"] == 6);
  CHECK(r.summary()["sector_prediction"] == 6);
  CHECK(invoke({"chern", "--grid", "64", "--band", "0"}).summary()["c1_lattice"] == 0);
  CHECK(invoke({"chern", "--band", "0.7"}).code == 2);
  CHECK(invoke({"chern", "--band", "2"}).code == 2);
}

TEST_CASE("chern at a gap closure exits with 3") {
  const Result r = invoke({"chern", "--gamma", "1.0", "--nu", "1", "--alpha", "1"});
  CHECK(r.code == 3);
  CHECK(r.err.find("gap closure") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("usage errors exit with 2 and name the flag") {
  Result r = invoke({"chern", "--bogus", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--bogus") != std::string::npos);
  r = invoke({"chern", "--alpha", "-1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("alpha") != std::string::npos);
  r = invoke({"chern", "--omega", "0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("omega") != std::string::npos);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"profile"}).code == 2);  // --out is required
  r = invoke({"reconstruct", "--bins", "8x8", "--generate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--bins") != std::string::npos);
  CHECK(invoke({"reconstruct", "--bins", "8,8"}).code == 2);
  CHECK(invoke({"trajectories", "--dt-frac", "0.1", "--out", scratch("x.csv").string()}).code == 2);
}

TEST_CASE("profile CSV matches the library bit for bit") {
  const fs::path file = scratch("cell.csv");
  const Result r = invoke({"profile", "--grid", "128", "--out", file.string()});
  REQUIRE(r.code == 0);
  CHECK(r.summary()["rows"] == 128 * 128);

  const std::string text = slurp(file);
  CHECK(text.rfind("# topowork profile\n# alpha=1 nu=1 gamma=0.5 omega_tilde=1 k=1 mass=1 hbar=1\n", 0) == 0);
  const auto lines = data_lines(file);
  REQUIRE(lines.size() == 1 + 128 * 128);
  CHECK(lines[0] == "t,x,e_field,grad_eps,grad_metric,total");

  const FieldParams p;
  for (std::size_t row : {std::size_t{1}, std::size_t{2}, std::size_t{777}, std::size_t{9000}, lines.size() - 1}) {
    std::istringstream in(lines[row]);
    double v[6];
    char c;
    in >> v[0] >> c >> v[1] >> c >> v[2] >> c >> v[3] >> c >> v[4] >> c >> v[5];
    const int i = static_cast<int>((row - 1) / 128), j = static_cast<int>((row - 1) % 128);
    const ForceSample f = force_components(p, i * p.period() / 128, j * p.wavelength() / 128, 1.0);
    CHECK(v[0] == f.t);
    CHECK(v[1] == f.x);
    CHECK(v[2] == f.e_field);
    CHECK(v[3] == f.grad_eps);
    CHECK(v[4] == f.grad_metric);
    CHECK(v[5] == f.total);
  }

  const fs::path again = scratch("cell2.csv");
  REQUIRE(invoke({"profile", "--grid", "128", "--out", again.string()}).code == 0);
  CHECK(slurp(again) == text);
}

TEST_CASE("phase-diagram CSV") {
  const fs::path file = scratch("phase.csv");
  const Result r = invoke({"phase-diagram", "--gamma-min", "-1.5", "--gamma-max", "1.5", "--gamma-steps", "7",
                           "--grid", "64", "--out", file.string()});
  REQUIRE(r.code == 0);
  CHECK(r.summary()["rows"] == 7);
  CHECK(r.summary()["flagged"] == 3);  // -1, 0, +1
  const auto lines = data_lines(file);
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] == "gamma_over_nu,c1_raw,c1_rounded,residual,min_gap");
  CHECK(lines[2].rfind("-1,nan,nan,nan,nan", 0) == 0);
  CHECK(lines[3].find(",-4,") != std::string::npos);
  CHECK(lines[5].find(",4,") != std::string::npos);

  const fs::path js = scratch("phase.json");
  REQUIRE(invoke({"phase-diagram", "--gamma-min", "0.5", "--gamma-max", "0.5", "--gamma-steps", "1", "--grid", "64",
                  "--out", js.string(), "--format", "json"})
              .code == 0);
  CHECK(json::parse(slurp(js))["rows"][0]["c1_rounded"] == 4);
}

TEST_CASE("trajectories round-trip through reconstruct") {
  const fs::path file = scratch("traj.csv");
  const Result t = invoke({"trajectories", "--nt-init", "2", "--nx-init", "3", "--dt-frac", "0.001", "--out",
                           file.string()});
  REQUIRE(t.code == 0);
  CHECK(t.summary()["trajectories"] == 6);
  const auto lines = data_lines(file);
  CHECK(lines[0] == "traj_id,t,x,v");
  CHECK(lines.size() == 1 + 6 * 1001);

  const Result r = invoke({"reconstruct", "--bins", "4,4", "--in", file.string()});
  REQUIRE(r.code == 0);
  const json s = r.summary();
  CHECK(s["n_trajectories"] == 6);

  const FieldParams p;
  const auto ensemble = release_ensemble(p, {2, 3, 0.001, 1.0});
  const ReconstructionReport direct = reconstruct_flux(ensemble, p, 1.0, {4, 4});
  CHECK(s["estimated_flux"].get<double>() == doctest::Approx(direct.estimated_flux).epsilon(1e-9));
  CHECK(s["coverage"].get<double>() == direct.coverage);
}

TEST_CASE("reconstruct --generate writes an optional report") {
  const fs::path file = scratch("report.json");
  const Result r = invoke({"reconstruct", "--generate", "--nt-init", "4", "--nx-init", "4", "--dt-frac", "0.001",
                           "--bins", "4,4", "--gamma", "2", "--out", file.string()});
  REQUIRE(r.code == 0);
  CHECK(r.summary()["rounded"] == 0);
  const json doc = json::parse(slurp(file));
  CHECK(doc["params"]["gamma"] == 2.0);
  CHECK(doc["rounded"] == 0);
}

TEST_CASE("monopole-check") {
  const Result r = invoke({"monopole-check", "--grid", "32"});
  REQUIRE(r.code == 0);
  CHECK(r.summary()["chern_upper"] == -1);
  CHECK(r.summary()["chern_lower"] == 1);
}

TEST_CASE("installed binary reports exit codes") {
  const std::string bin = TOPOWORK_CLI_PATH;
  const std::string quiet = " >/dev/null 2>&1";
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + quiet).c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("monopole-check --grid 16") == 0);
  CHECK(status("chern --gamma 1.0 --nu 1 --alpha 1") == 3);
  CHECK(status("chern --nope") == 2);
}
