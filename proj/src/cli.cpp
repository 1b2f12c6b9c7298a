#include "topowork/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "topowork/dynamics.hpp"
#include "topowork/errors.hpp"
#include "topowork/field.hpp"
#include "topowork/geometry.hpp"
#include "topowork/spin.hpp"
#include "topowork/topology.hpp"

namespace topowork::cli {

namespace {

using nlohmann::json;

/// Everything a subcommand needs, filled in by the parser.
struct RunConfig {
  std::string subcommand;
  FieldParams params;
  double mass = 1.0;
  int grid = 0;
  int two_j = 2;
  double band = 1.0;
  double gamma_min = -2.0;
  double gamma_max = 2.0;
  int gamma_steps = 41;
  int nt_init = 8;
  int nx_init = 8;
  double dt_frac = 1.0 / 2000.0;
  std::string bins = "32,32";
  std::string in_path;
  bool generate = false;
  bool no_subtract = false;
  double min_coverage = 0.9;
  std::string out_path;
  std::string format = "csv";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string params_line(const RunConfig& cfg) {
  const FieldParams& p = cfg.params;
  return fmt::format("# alpha={} nu={} gamma={} omega_tilde={} k={} mass={} hbar=1\n", num(p.alpha),
                     num(p.nu), num(p.gamma), num(p.omega_tilde), num(p.k), num(cfg.mass));
}

json params_json(const RunConfig& cfg) {
  const FieldParams& p = cfg.params;
  return {{"alpha", p.alpha}, {"nu", p.nu},       {"gamma", p.gamma},
          {"omega_tilde", p.omega_tilde}, {"k", p.k}, {"mass", cfg.mass}, {"hbar", 1.0}};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("--out: cannot open '" + path + "' for writing");
  return f;
}

int band_to_two_m(double band) {
  const double twice = 2.0 * band;
  if (std::abs(twice - std::round(twice)) > 1e-9)
    throw UsageError("--band: must be an integer or half-integer");
  return static_cast<int>(std::lround(twice));
}

void add_field_flags(CLI::App* app, RunConfig& cfg, bool with_gamma) {
  app->add_option("--alpha", cfg.params.alpha, "Coupling amplitude alpha")->check(CLI::NonNegativeNumber);
  app->add_option("--nu", cfg.params.nu, "Detuning modulation nu")->check(CLI::NonNegativeNumber);
  if (with_gamma) app->add_option("--gamma", cfg.params.gamma, "Static detuning gamma");
  app->add_option("--omega", cfg.params.omega_tilde, "Drive frequency")->check(CLI::PositiveNumber);
  app->add_option("--k", cfg.params.k, "Wave number")->check(CLI::PositiveNumber);
}

json run_phase_diagram(const RunConfig& cfg) {
  if (cfg.gamma_steps < 1) throw UsageError("--gamma-steps: must be >= 1");
  if (cfg.gamma_max < cfg.gamma_min) throw UsageError("--gamma-max: must be >= --gamma-min");
  std::vector<double> ratios;
  for (int i = 0; i < cfg.gamma_steps; ++i)
    ratios.push_back(cfg.gamma_steps == 1
                         ? cfg.gamma_min
                         : cfg.gamma_min + (cfg.gamma_max - cfg.gamma_min) * i / (cfg.gamma_steps - 1));
  const auto rows = phase_diagram(cfg.params, ratios, {cfg.grid, cfg.grid});

  std::ofstream f = open_output(cfg.out_path);
  int flagged = 0;
  json table = json::array();
  for (const PhaseRow& r : rows) {
    const bool ok = r.status == PhaseRowStatus::ok;
    flagged += ok ? 0 : 1;
    table.push_back({{"gamma_over_nu", r.gamma_over_nu},
                     {"c1_raw", r.c1_raw},
                     {"c1_rounded", ok ? json(r.c1_rounded) : json(nullptr)},
                     {"residual", r.residual},
                     {"min_gap", r.min_gap}});
  }
  if (cfg.format == "json") {
    f << json{{"params", params_json(cfg)}, {"rows", table}}.dump(2) << '\n';
  } else {
    f << "# topowork phase-diagram\n" << params_line(cfg);
    f << "gamma_over_nu,c1_raw,c1_rounded,residual,min_gap\n";
    for (const PhaseRow& r : rows) {
      const bool ok = r.status == PhaseRowStatus::ok;
      f << num(r.gamma_over_nu) << ',' << num(r.c1_raw) << ','
        << (ok ? std::to_string(r.c1_rounded) : std::string("nan")) << ',' << num(r.residual) << ','
        << num(r.min_gap) << '\n';
    }
  }
  double worst = 0.0;
  for (const PhaseRow& r : rows)
    if (r.status == PhaseRowStatus::ok) worst = std::max(worst, r.residual);
  return {{"rows", rows.size()}, {"flagged", flagged}, {"max_residual", worst}, {"out", cfg.out_path}};
}

json run_profile(const RunConfig& cfg) {
  const int n = cfg.grid;
  if (n < 1) throw UsageError("--grid: must be >= 1");
  const double dt = cfg.params.period() / n;
  const double dx = cfg.params.wavelength() / n;
  std::vector<ForceSample> samples;
  samples.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) samples.push_back(force_components(cfg.params, i * dt, j * dx, cfg.mass));

  std::ofstream f = open_output(cfg.out_path);
  if (cfg.format == "json") {
    json rows = json::array();
    for (const ForceSample& s : samples)
      rows.push_back({s.t, s.x, s.e_field, s.grad_eps, s.grad_metric, s.total});
    f << json{{"params", params_json(cfg)},
              {"columns", {"t", "x", "e_field", "grad_eps", "grad_metric", "total"}},
              {"rows", rows}}
             .dump()
      << '\n';
  } else {
    f << "# topowork profile\n" << params_line(cfg);
    f << "t,x,e_field,grad_eps,grad_metric,total\n";
    for (const ForceSample& s : samples)
      f << num(s.t) << ',' << num(s.x) << ',' << num(s.e_field) << ',' << num(s.grad_eps) << ','
        << num(s.grad_metric) << ',' << num(s.total) << '\n';
  }
  return {{"rows", samples.size()}, {"out", cfg.out_path}};
}

json run_chern(const RunConfig& cfg, std::ostream& err) {
  const GridSpec grid{cfg.grid, cfg.grid};
  grid.validate();
  if (cfg.two_j < 1) throw UsageError("--two-j: must be >= 1");
  const int two_m = band_to_two_m(cfg.band);
  const SpinRep rep = spin_generators(cfg.two_j);
  try {
    band_position(rep, two_m);
  } catch (const std::out_of_range& e) {
    throw UsageError(std::string("--band: ") + e.what());
  }

  const double gap = min_gap(cfg.params, std::max(grid.n_t, 16));
  if (!(gap > cfg.params.degeneracy_threshold()))
    throw DegeneratePointError(std::nan(""), std::nan(""), gap);

  const FluxResult w = winding_number(cfg.params, grid);
  const FluxResult c1 = chern_from_flux(cfg.params, grid);
  const FluxResult lattice = lattice_flux(HermitianField(rep, cfg.params), two_m, grid);
  if (!w.quantized() || !c1.quantized())
    err << "warning: flux integrals are not quantized (residual " << std::max(w.residual, c1.residual)
        << "); the grid may be too coarse or the gap nearly closed\n";
  return {{"winding", w.rounded},
          {"winding_raw", w.raw},
          {"c1_flux", c1.rounded},
          {"c1_flux_raw", c1.raw},
          {"c1_lattice", lattice.rounded},
          {"band", cfg.band},
          {"two_j", cfg.two_j},
          {"sector_prediction", sector_chern(two_m, static_cast<int>(w.rounded))},
          {"min_gap", gap},
          {"rounded", c1.rounded},
          {"residual", std::max(w.residual, c1.residual)},
          {"residuals", {{"winding", w.residual}, {"c1_flux", c1.residual}, {"c1_lattice", lattice.residual}}}};
}

EnsembleSpec ensemble_from(const RunConfig& cfg) {
  if (cfg.nt_init < 1) throw UsageError("--nt-init: must be >= 1");
  if (cfg.nx_init < 1) throw UsageError("--nx-init: must be >= 1");
  if (!(cfg.dt_frac > 0.0) || cfg.dt_frac > 1.0 / 200.0)
    throw UsageError("--dt-frac: must be in (0, 1/200]");
  return {cfg.nt_init, cfg.nx_init, cfg.dt_frac, cfg.mass};
}

json run_trajectories(const RunConfig& cfg) {
  const auto trajectories = release_ensemble(cfg.params, ensemble_from(cfg));
  std::ofstream f = open_output(cfg.out_path);
  f << "# topowork trajectories\n" << params_line(cfg);
  f << "traj_id,t,x,v\n";
  std::size_t rows = 0;
  for (std::size_t id = 0; id < trajectories.size(); ++id)
    for (const TrajectorySample& s : trajectories[id].samples) {
      f << id << ',' << num(s.t) << ',' << num(s.x) << ',' << num(s.v) << '\n';
      ++rows;
    }
  return {{"trajectories", trajectories.size()}, {"rows", rows}, {"out", cfg.out_path}};
}

BinSpec parse_bins(const std::string& text) {
  BinSpec bins;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> bins.n_t >> comma >> bins.n_x) || comma != ',' || !in.eof() || bins.n_t < 1 || bins.n_x < 1)
    throw UsageError("--bins: expected two positive integers 'Nt,Nx', got '" + text + "'");
  return bins;
}

std::vector<Trajectory> read_trajectories(const std::string& path, const RunConfig& cfg) {
  std::ifstream f(path);
  if (!f) throw UsageError("--in: cannot open '" + path + "'");
  std::map<long, Trajectory> by_id;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "traj_id,t,x,v") throw UsageError("--in: expected header 'traj_id,t,x,v'");
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    long id = 0;
    TrajectorySample s;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(row >> id >> c1 >> s.t >> c2 >> s.x >> c3 >> s.v) || c1 != ',' || c2 != ',' || c3 != ',')
      throw UsageError(fmt::format("--in: malformed row at line {}", line_no));
    Trajectory& traj = by_id[id];
    traj.samples.push_back(s);
  }
  std::vector<Trajectory> out;
  for (auto& [id, traj] : by_id) {
    traj.mass = cfg.mass;
    traj.params = cfg.params;
    if (traj.samples.size() >= 2) traj.dt = traj.samples[1].t - traj.samples[0].t;
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
      if (!(traj.samples[i].t > traj.samples[i - 1].t))
        throw UsageError(fmt::format("--in: trajectory {} has non-increasing times", id));
    out.push_back(std::move(traj));
  }
  return out;
}

json run_reconstruct(const RunConfig& cfg) {
  const BinSpec bins = parse_bins(cfg.bins);
  if (cfg.generate == !cfg.in_path.empty())
    throw UsageError("reconstruct: give exactly one of --in FILE or --generate");
  const auto trajectories =
      cfg.generate ? release_ensemble(cfg.params, ensemble_from(cfg)) : read_trajectories(cfg.in_path, cfg);
  ReconstructionOptions options;
  options.subtract_known_forces = !cfg.no_subtract;
  options.min_coverage = cfg.min_coverage;
  const ReconstructionReport r = reconstruct_flux(trajectories, cfg.params, cfg.mass, bins, options);
  json summary = {{"estimated_flux", r.estimated_flux},
                  {"rounded", r.rounded},
                  {"residual", r.residual},
                  {"coverage", r.coverage},
                  {"sufficient_coverage", r.sufficient_coverage},
                  {"n_trajectories", r.n_trajectories}};
  if (!cfg.out_path.empty()) {
    std::ofstream f = open_output(cfg.out_path);
    json doc = summary;
    doc["params"] = params_json(cfg);
    f << doc.dump(2) << '\n';
  }
  return summary;
}

json run_monopole(const RunConfig& cfg) {
  const int upper = monopole_sphere_chern(cfg.grid, cfg.grid, true);
  const int lower = monopole_sphere_chern(cfg.grid, cfg.grid, false);
  return {{"chern_upper", upper}, {"chern_lower", lower}, {"rounded", upper}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Topologically quantized work of a dressed three-level atom", "topowork"};
  app.require_subcommand(1);

  auto* phase = app.add_subcommand("phase-diagram", "Scan gamma/nu and write c1 per row (CSV)");
  add_field_flags(phase, cfg, false);
  phase->add_option("--gamma-min", cfg.gamma_min, "First gamma/nu");
  phase->add_option("--gamma-max", cfg.gamma_max, "Last gamma/nu");
  phase->add_option("--gamma-steps", cfg.gamma_steps, "Number of rows")->check(CLI::PositiveNumber);
  phase->add_option("--grid", cfg.grid, "Quadrature grid N (N x N)")->check(CLI::Range(8, 1 << 14));
  phase->add_option("--out", cfg.out_path, "Output file")->required();
  phase->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* profile = app.add_subcommand("profile", "Force components on an N x N grid of the unit cell");
  add_field_flags(profile, cfg, true);
  profile->add_option("--mass", cfg.mass, "Atom mass")->check(CLI::PositiveNumber);
  profile->add_option("--grid", cfg.grid, "Grid N (N x N)")->check(CLI::Range(1, 1 << 14));
  profile->add_option("--out", cfg.out_path, "Output file")->required();
  profile->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* chern = app.add_subcommand("chern", "Winding number and Chern numbers of one parameter set");
  add_field_flags(chern, cfg, true);
  chern->add_option("--grid", cfg.grid, "Grid N (N x N)")->check(CLI::Range(8, 1 << 14));
  chern->add_option("--band", cfg.band, "Band label m (J3 eigenvalue)");
  chern->add_option("--two-j", cfg.two_j, "Representation 2J")->check(CLI::Range(1, 64));

  auto* traj = app.add_subcommand("trajectories", "Integrate a release ensemble and write samples");
  add_field_flags(traj, cfg, true);
  traj->add_option("--mass", cfg.mass, "Atom mass")->check(CLI::PositiveNumber);
  traj->add_option("--nt-init", cfg.nt_init, "Release instants per period")->check(CLI::PositiveNumber);
  traj->add_option("--nx-init", cfg.nx_init, "Release positions per wavelength")->check(CLI::PositiveNumber);
  traj->add_option("--dt-frac", cfg.dt_frac, "Time step as a fraction of T")->check(CLI::PositiveNumber);
  traj->add_option("--out", cfg.out_path, "Output file")->required();

  auto* recon = app.add_subcommand("reconstruct", "Recover the Chern number from trajectories");
  add_field_flags(recon, cfg, true);
  recon->add_option("--mass", cfg.mass, "Atom mass")->check(CLI::PositiveNumber);
  recon->add_option("--bins", cfg.bins, "Bins 'Nt,Nx'");
  auto* in_opt = recon->add_option("--in", cfg.in_path, "Trajectory CSV written by 'trajectories'");
  auto* gen_opt = recon->add_flag("--generate", cfg.generate, "Integrate a release ensemble in-process");
  in_opt->excludes(gen_opt);
  recon->add_option("--nt-init", cfg.nt_init, "Release instants per period")->check(CLI::PositiveNumber);
  recon->add_option("--nx-init", cfg.nx_init, "Release positions per wavelength")->check(CLI::PositiveNumber);
  recon->add_option("--dt-frac", cfg.dt_frac, "Time step as a fraction of T")->check(CLI::PositiveNumber);
  recon->add_flag("--no-subtract", cfg.no_subtract, "Skip subtracting the known forces");
  recon->add_option("--min-coverage", cfg.min_coverage, "Coverage needed to claim a rounded value")
      ->check(CLI::Range(0.0, 1.0));
  recon->add_option("--out", cfg.out_path, "Optional JSON report file");

  auto* mono = app.add_subcommand("monopole-check", "Chern numbers of n.sigma over the sphere");
  mono->add_option("--grid", cfg.grid, "Sphere grid N (N x N)")->check(CLI::Range(16, 1 << 12));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.grid == 0) cfg.grid = cfg.subcommand == "profile" ? 128 : cfg.subcommand == "monopole-check" ? 64 : 256;
  if (cfg.subcommand == "reconstruct" && app.get_subcommand("reconstruct")->count("--nt-init") == 0)
    cfg.nt_init = 32;
  if (cfg.subcommand == "reconstruct" && app.get_subcommand("reconstruct")->count("--nx-init") == 0)
    cfg.nx_init = 32;

  try {
    cfg.params.validate();
    json summary;
    if (cfg.subcommand == "phase-diagram") summary = run_phase_diagram(cfg);
    else if (cfg.subcommand == "profile") summary = run_profile(cfg);
    else if (cfg.subcommand == "chern") summary = run_chern(cfg, err);
    else if (cfg.subcommand == "trajectories") summary = run_trajectories(cfg);
    else if (cfg.subcommand == "reconstruct") summary = run_reconstruct(cfg);
    else summary = run_monopole(cfg);
    summary["subcommand"] = cfg.subcommand;
    summary["params"] = params_json(cfg);
    out << summary.dump() << '\n';
    return kSuccess;
  } catch (const DegeneratePointError& e) {
    err << "gap closure: " << e.what() << '\n';
    return kGapClosure;
  } catch (const BlowUpError& e) {
    err << "adiabaticity broken: " << e.what() << '\n';
    return kGapClosure;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const RefineGridError& e) {
    err << "usage error: --grid too coarse: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace topowork::cli
