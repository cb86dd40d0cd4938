#include "ris/presets.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ris::presets {
namespace {

// All presets share the reference population (N=4 RISs, J=4 blocks) with
// M adjusted from 30 to 32 so that M' = M/J stays integral, P = 30 dB,
// N0 = 10 dB, d = 4 m and random phase shifts. The per-link average SNR
// axis sweeps lambda_u = lambda_b jointly on a linear grid.

constexpr const char* kFig2Scenario =
    "# outage vs average per-link SNR, one series per element failure probability\n"
    "# population adjusted from M=30 to M=32 so that M' = M/J stays integral\n"
    "n_ris = 4\n"
    "blocks_per_ris = 4\n"
    "elements_per_ris = 32\n"
    "tx_power_db = 30\n"
    "noise_power_db = 10\n"
    "obstacle_coeff = 1\n"
    "rho1 = 0.1\n"
    "rho2 = 0.1\n"
    "# lambda_u and lambda_b are swept jointly by the avg_snr_lambda axis\n"
    "lambda_u = 0.05\n"
    "lambda_b = 0.05\n"
    "fail_prob = 0\n"
    "gamma_t = 3\n"
    "dist_user_m = 4\n"
    "dist_bs_m = 4\n"
    "pathloss_exp = 2\n"
    "correlation_kind = identity\n"
    "correlation_param = 0\n"
    "phase_mode = random\n"
    "seed = 1\n";

constexpr const char* kFig3Scenario =
    "# outage vs average per-link SNR with and without an obstacle (nu = 0.1 vs 1)\n"
    "# population adjusted from M=30 to M=32 so that M' = M/J stays integral\n"
    "n_ris = 4\n"
    "blocks_per_ris = 4\n"
    "elements_per_ris = 32\n"
    "tx_power_db = 30\n"
    "noise_power_db = 10\n"
    "obstacle_coeff = 1\n"
    "rho1 = 0.1\n"
    "rho2 = 0.1\n"
    "# lambda_u and lambda_b are swept jointly by the avg_snr_lambda axis\n"
    "lambda_u = 0.05\n"
    "lambda_b = 0.05\n"
    "fail_prob = 0\n"
    "gamma_t = 3\n"
    "dist_user_m = 4\n"
    "dist_bs_m = 4\n"
    "pathloss_exp = 2\n"
    "correlation_kind = identity\n"
    "correlation_param = 0\n"
    "phase_mode = random\n"
    "seed = 1\n";

constexpr const char* kFig4Scenario =
    "# outage vs RIS element count M, strongly correlated elements\n"
    "# series override rho1 = rho2 and the uniform correlation level jointly\n"
    "n_ris = 4\n"
    "blocks_per_ris = 4\n"
    "elements_per_ris = 32\n"
    "tx_power_db = 30\n"
    "noise_power_db = 10\n"
    "obstacle_coeff = 1\n"
    "rho1 = 0.9\n"
    "rho2 = 0.9\n"
    "lambda_u = 0.05\n"
    "lambda_b = 0.05\n"
    "fail_prob = 0\n"
    "gamma_t = 3\n"
    "dist_user_m = 4\n"
    "dist_bs_m = 4\n"
    "pathloss_exp = 2\n"
    "correlation_kind = uniform\n"
    "correlation_param = 0.9\n"
    "phase_mode = random\n"
    "seed = 1\n";

constexpr const char* kFig5Scenario =
    "# outage vs user-RIS distance, with and without an obstacle\n"
    "# series override rho1 = rho2 and the uniform correlation level jointly\n"
    "n_ris = 4\n"
    "blocks_per_ris = 4\n"
    "elements_per_ris = 32\n"
    "tx_power_db = 30\n"
    "noise_power_db = 10\n"
    "obstacle_coeff = 1\n"
    "rho1 = 0.9\n"
    "rho2 = 0.9\n"
    "lambda_u = 0.05\n"
    "lambda_b = 0.05\n"
    "fail_prob = 0\n"
    "gamma_t = 3\n"
    "dist_user_m = 4\n"
    "dist_bs_m = 4\n"
    "pathloss_exp = 2\n"
    "correlation_kind = uniform\n"
    "correlation_param = 0.9\n"
    "phase_mode = random\n"
    "seed = 1\n";

std::vector<Preset> build_presets() {
  std::vector<Preset> v;

  {
    Preset p;
    p.name = "fig2";
    p.title = "outage vs average SNR for several failure probabilities";
    p.scenario_text = kFig2Scenario;
    p.axis = sweep::Axis::avg_snr_lambda;
    p.grid = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    p.series = {
        {"p0", "p = 0", 0.0, {}, {}, {}},
        {"p0.2", "p = 0.2", 0.2, {}, {}, {}},
        {"p0.5", "p = 0.5", 0.5, {}, {}, {}},
        {"p0.7", "p = 0.7", 0.7, {}, {}, {}},
    };
    v.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "fig3";
    p.title = "outage vs average SNR with and without an obstacle";
    p.scenario_text = kFig3Scenario;
    p.axis = sweep::Axis::avg_snr_lambda;
    p.grid = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    p.series = {
        {"nu1_p0", "clear (nu = 1), p = 0", 0.0, 1.0, {}, {}},
        {"nu0.1_p0", "obstacle (nu = 0.1), p = 0", 0.0, 0.1, {}, {}},
        {"nu1_p0.5", "clear (nu = 1), p = 0.5", 0.5, 1.0, {}, {}},
        {"nu0.1_p0.5", "obstacle (nu = 0.1), p = 0.5", 0.5, 0.1, {}, {}},
    };
    v.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "fig4";
    p.title = "outage vs number of elements";
    p.scenario_text = kFig4Scenario;
    p.axis = sweep::Axis::n_elements;
    p.grid = {8, 16, 32, 48, 64};
    p.series = {
        {"rho0.1", "rho = 0.1 (weak)", {}, {}, 0.1, 0.1},
        {"rho0.5", "rho = 0.5", {}, {}, 0.5, 0.5},
        {"rho0.9", "rho = 0.9 (strong)", {}, {}, 0.9, 0.9},
    };
    v.push_back(std::move(p));
  }
  {
    Preset p;
    p.name = "fig5";
    p.title = "outage vs user-RIS distance";
    p.scenario_text = kFig5Scenario;
    p.axis = sweep::Axis::dist_user;
    p.grid = {1, 2, 3, 4, 5, 6, 7, 8};
    p.series = {
        {"rho0.1_nu1", "rho = 0.1, clear", {}, 1.0, 0.1, 0.1},
        {"rho0.5_nu1", "rho = 0.5, clear", {}, 1.0, 0.5, 0.5},
        {"rho0.9_nu1", "rho = 0.9, clear", {}, 1.0, 0.9, 0.9},
        {"rho0.1_nu0.1", "rho = 0.1, obstacle", {}, 0.1, 0.1, 0.1},
        {"rho0.5_nu0.1", "rho = 0.5, obstacle", {}, 0.1, 0.5, 0.5},
        {"rho0.9_nu0.1", "rho = 0.9, obstacle", {}, 0.1, 0.9, 0.9},
    };
    v.push_back(std::move(p));
  }
  return v;
}

std::string axis_plot_label(sweep::Axis axis) {
  switch (axis) {
    case sweep::Axis::avg_snr_lambda: return "average per-link SNR (lambda)";
    case sweep::Axis::fail_prob: return "element failure probability p";
    case sweep::Axis::n_elements: return "number of RIS elements M";
    case sweep::Axis::dist_user: return "user-RIS distance (m)";
    case sweep::Axis::gamma_t: return "SNR threshold gamma_T";
  }
  return "?";
}

}  // namespace

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = build_presets();
  return presets;
}

const Preset* find_preset(std::string_view name) {
  for (const auto& p : all_presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

model::Scenario series_scenario(const Preset& p, const SeriesOverride& s) {
  std::istringstream in(p.scenario_text);
  model::Scenario scn = model::parse_scenario(in, p.name + " preset");
  scn.validated = false;
  scn.blocks.clear();
  if (s.fail_prob) scn.fail_prob = *s.fail_prob;
  if (s.obstacle_coeff) scn.obstacle_coeff = *s.obstacle_coeff;
  if (s.rho) {
    scn.rho1 = *s.rho;
    scn.rho2 = *s.rho;
  }
  if (s.corr_uniform) {
    scn.correlation_kind = model::CorrelationKind::uniform;
    scn.correlation_param = *s.corr_uniform;
  }
  return model::validate(std::move(scn));
}

PresetRun run_preset(const Preset& p, std::uint64_t trials, std::uint64_t seed, int workers) {
  PresetRun run;
  run.name = p.name;
  run.axis = p.axis;
  run.trials = trials ? trials : p.default_trials;
  run.seed = seed;
  for (const auto& s : p.series) {
    sweep::SweepSpec spec;
    spec.axis = p.axis;
    spec.grid = p.grid;
    spec.fixed = series_scenario(p, s);
    spec.trials = run.trials;
    spec.seed = seed;
    spec.crn = true;
    spec.workers = workers;
    run.series.push_back({s, sweep::run_sweep(spec)});
  }
  return run;
}

std::vector<std::string> write_preset_outputs(const PresetRun& run, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;

  for (const auto& sr : run.series) {
    const std::string path = (fs::path(out_dir) / (run.name + "_" + sr.series.file_label + ".csv")).string();
    sweep::emit_csv(sr.rows, run.axis, path);
    written.push_back(path);
  }

  {
    const std::string path = (fs::path(out_dir) / (run.name + ".plt")).string();
    std::ofstream plt(path, std::ios::binary);
    if (!plt) throw std::runtime_error("cannot open " + path + " for writing");
    plt << "# gnuplot script generated by ris-outage (preset " << run.name << ")\n";
    plt << "set datafile separator ','\n";
    plt << "set xlabel '" << axis_plot_label(run.axis) << "'\n";
    plt << "set ylabel 'outage probability'\n";
    plt << "set yrange [0:1.05]\n";
    plt << "set key outside right\n";
    plt << "set grid\n";
    plt << "plot \\\n";
    bool first = true;
    for (const auto& sr : run.series) {
      const std::string csv = run.name + "_" + sr.series.file_label + ".csv";
      const bool has_mc = !sr.rows.empty() && sr.rows.front().outage_mc.has_value();
      const bool has_cf = !sr.rows.empty() && sr.rows.front().outage_cf.has_value();
      if (has_mc) {
        if (!first) plt << ", \\\n";
        plt << "  '" << csv << "' using 2:4 with linespoints title 'MC " << sr.series.title << "'";
        first = false;
      }
      if (has_cf) {
        if (!first) plt << ", \\\n";
        plt << "  '" << csv << "' using 2:3 with lines dashtype 2 title 'CF " << sr.series.title << "'";
        first = false;
      }
    }
    plt << "\n";
    written.push_back(path);
  }

  bool any_both = false;
  for (const auto& sr : run.series) {
    for (const auto& r : sr.rows) {
      if (r.outage_cf && r.outage_mc) any_both = true;
    }
  }
  if (any_both) {
    const std::string path = (fs::path(out_dir) / (run.name + "_agreement.txt")).string();
    std::ofstream rep(path, std::ios::binary);
    if (!rep) throw std::runtime_error("cannot open " + path + " for writing");
    for (const auto& sr : run.series) {
      rep << sweep::agreement_report(sr.rows).render(run.name + " " + sr.series.title) << "\n";
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace ris::presets
