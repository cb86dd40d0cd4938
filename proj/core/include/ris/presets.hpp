#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ris/sweep.hpp"

// Shipped sweep presets reproducing the reference figure shapes. The
// scenario text embedded here is byte-identical to the presets/*.cfg
// files in the repository; `presets run` uses the embedded copy so the
// binary works from any directory.

namespace ris::presets {

struct SeriesOverride {
  std::string file_label;  // filename-safe, e.g. "p0.2"
  std::string title;       // display label, e.g. "p = 0.2"
  std::optional<double> fail_prob;
  std::optional<double> obstacle_coeff;
  std::optional<double> rho;           // sets rho1 = rho2
  std::optional<double> corr_uniform;  // sets uniform(a) element correlation
};

struct Preset {
  std::string name;
  std::string title;
  const char* scenario_text;
  sweep::Axis axis;
  std::vector<double> grid;
  std::vector<SeriesOverride> series;
  std::uint64_t default_trials = 100000;
};

const std::vector<Preset>& all_presets();
const Preset* find_preset(std::string_view name);

// base scenario of a series with its overrides applied, validated
model::Scenario series_scenario(const Preset& p, const SeriesOverride& s);

struct SeriesRun {
  SeriesOverride series;
  std::vector<sweep::SweepRow> rows;
};

struct PresetRun {
  std::string name;
  sweep::Axis axis;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<SeriesRun> series;
};

// Runs every series with common random numbers (trials = 0 picks the
// preset default).
PresetRun run_preset(const Preset& p, std::uint64_t trials, std::uint64_t seed, int workers = 0);

// Writes <name>_<label>.csv per series, a <name>.plt gnuplot script, and
// <name>_agreement.txt when both methods ran; returns the paths written.
std::vector<std::string> write_preset_outputs(const PresetRun& run, const std::string& out_dir);

}  // namespace ris::presets
