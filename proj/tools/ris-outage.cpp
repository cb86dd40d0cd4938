#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ris/closedform.hpp"
#include "ris/model.hpp"
#include "ris/presets.hpp"
#include "ris/sweep.hpp"

namespace {

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> grid;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw ris::sweep::SweepError("bad grid value: `" + item + "`");
    grid.push_back(v);
  }
  return grid;
}

int run_command(const std::string& scenario_path, const std::string& axis_name,
                const std::string& grid_csv, const std::string& methods, std::uint64_t trials,
                std::uint64_t seed, bool crn, const std::string& out_dir) {
  const auto axis = ris::sweep::axis_from_string(axis_name);
  if (!axis) {
    throw ris::sweep::SweepError(
        "unknown axis `" + axis_name +
        "`; expected avg_snr_lambda|fail_prob|n_elements|dist_user|gamma_t");
  }

  ris::sweep::SweepSpec spec;
  spec.axis = *axis;
  spec.grid = parse_grid(grid_csv);
  spec.fixed = ris::model::load_scenario(scenario_path);
  spec.run_cf = methods.find("cf") != std::string::npos;
  spec.run_mc = methods.find("mc") != std::string::npos;
  spec.trials = trials;
  spec.seed = seed;
  spec.crn = crn;

  const auto rows = ris::sweep::run_sweep(spec);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string csv_path =
      (fs::path(out_dir) / ("sweep_" + ris::sweep::to_string(*axis) + ".csv")).string();
  ris::sweep::emit_csv(rows, *axis, csv_path);
  std::cout << "wrote " << csv_path << "\n";

  if (spec.run_cf && spec.run_mc) {
    const auto rep = ris::sweep::agreement_report(rows);
    const std::string rep_path =
        (fs::path(out_dir) / ("agreement_" + ris::sweep::to_string(*axis) + ".txt")).string();
    std::ofstream out(rep_path, std::ios::binary);
    out << rep.render("sweep over " + ris::sweep::to_string(*axis));
    std::cout << "wrote " << rep_path << "\n";
    std::cout << "agreement verdict: " << (rep.all_agree ? "agree" : "diverge") << "\n";
  }
  return 0;
}

int validate_command(const std::string& scenario_path) {
  const auto scn = ris::model::load_scenario(scenario_path);
  std::printf("scenario OK: N=%d J=%d M=%d (M'=%d, %d paths)\n", scn.n_ris, scn.blocks_per_ris,
              scn.elements_per_ris, scn.m_prime, scn.n_paths());
  std::printf("  gamma_T=%.10g  Omega=%.10g  lambda_U=%.10g  lambda_B=%.10g\n", scn.gamma_t,
              scn.budget.omega, scn.lambda_u, scn.lambda_b);
  std::printf("  rho1=%.10g rho2=%.10g  p=%.10g  nu=%.10g  d_U=%.10g d_B=%.10g delta=%.10g\n",
              scn.rho1, scn.rho2, scn.fail_prob, scn.obstacle_coeff, scn.dist_user_m,
              scn.dist_bs_m, scn.pathloss_exp);
  std::printf("  correlation=%s(%.10g)  phases=%s  seed=%llu\n",
              ris::model::to_string(scn.correlation_kind).c_str(), scn.correlation_param,
              ris::model::to_string(scn.phase_mode).c_str(),
              static_cast<unsigned long long>(scn.seed));
  return 0;
}

int presets_list_command() {
  for (const auto& p : ris::presets::all_presets()) {
    std::printf("%-6s  %s\n", p.name.c_str(), p.title.c_str());
    std::printf("        axis=%s, %zu grid points, %zu series, default trials=%llu\n",
                ris::sweep::to_string(p.axis).c_str(), p.grid.size(), p.series.size(),
                static_cast<unsigned long long>(p.default_trials));
  }
  return 0;
}

int presets_run_command(const std::string& name, std::uint64_t trials, std::uint64_t seed,
                        const std::string& out_dir) {
  const auto* p = ris::presets::find_preset(name);
  if (!p) throw ris::sweep::SweepError("unknown preset `" + name + "`; see `presets list`");
  const auto run = ris::presets::run_preset(*p, trials, seed);
  for (const auto& path : ris::presets::write_preset_outputs(run, out_dir)) {
    std::cout << "wrote " << path << "\n";
  }
  for (const auto& sr : run.series) {
    bool both = true;
    for (const auto& r : sr.rows) both = both && r.outage_cf && r.outage_mc;
    if (both) {
      const auto rep = ris::sweep::agreement_report(sr.rows);
      std::cout << "series " << sr.series.file_label << ": "
                << (rep.all_agree ? "agree" : "diverge") << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted wireless path outage: closed form, Monte Carlo, sweeps"};
  app.require_subcommand(1);

  std::string scenario_path, axis_name, grid_csv, out_dir = "out";
  std::string methods = "cf,mc";
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  bool crn = false;

  auto* run = app.add_subcommand("run", "run a parameter sweep over a scenario file");
  run->add_option("--scenario", scenario_path, "scenario config file")->required();
  run->add_option("--axis", axis_name,
                  "sweep axis: avg_snr_lambda|fail_prob|n_elements|dist_user|gamma_t")
      ->required();
  run->add_option("--grid", grid_csv, "comma-separated, strictly increasing grid")->required();
  run->add_option("--methods", methods, "subset of cf,mc (default cf,mc)");
  run->add_option("--trials", trials, "Monte Carlo trials per grid point");
  run->add_option("--seed", seed, "Monte Carlo base seed");
  run->add_flag("--crn", crn, "common random numbers across grid points");
  run->add_option("--out", out_dir, "output directory")->required();

  auto* val = app.add_subcommand("validate", "validate a scenario file and print the derived fields");
  std::string val_path;
  val->add_option("--scenario", val_path, "scenario config file")->required();

  auto* pre = app.add_subcommand("presets", "list or run the shipped figure presets");
  pre->require_subcommand(1);
  auto* plist = pre->add_subcommand("list", "list available presets");
  auto* prun = pre->add_subcommand("run", "run a preset end to end");
  std::string preset_name, preset_out = "out";
  std::uint64_t preset_trials = 0;  // 0 = preset default
  std::uint64_t preset_seed = 1;
  prun->add_option("name", preset_name, "preset name (fig2|fig3|fig4|fig5)")->required();
  prun->add_option("--trials", preset_trials, "override trials per grid point");
  prun->add_option("--seed", preset_seed, "Monte Carlo base seed");
  prun->add_option("--out", preset_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      return run_command(scenario_path, axis_name, grid_csv, methods, trials, seed, crn, out_dir);
    }
    if (val->parsed()) return validate_command(val_path);
    if (pre->parsed()) {
      if (plist->parsed()) return presets_list_command();
      if (prun->parsed()) return presets_run_command(preset_name, preset_trials, preset_seed, preset_out);
    }
  } catch (const ris::model::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ris::model::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ris::sweep::SweepError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
