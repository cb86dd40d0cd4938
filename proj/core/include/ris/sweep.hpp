#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ris/model.hpp"

// Parameter-sweep orchestration: evaluate closed-form and Monte Carlo
// outage over a grid, emit deterministic CSV / gnuplot artifacts and the
// closed-form-vs-MC agreement report.

namespace ris::sweep {

enum class Axis { avg_snr_lambda, fail_prob, n_elements, dist_user, gamma_t };

std::string to_string(Axis axis);
std::optional<Axis> axis_from_string(std::string_view name);

struct SweepSpec {
  Axis axis = Axis::avg_snr_lambda;
  std::vector<double> grid;  // nonempty, strictly increasing
  model::Scenario fixed;     // base scenario; the axis field is overridden per point
  bool run_cf = true;
  bool run_mc = true;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  bool crn = false;  // common random numbers: reuse the trial streams at every grid point
  int workers = 0;   // 0 = auto (hardware, capped by RIS_OUTAGE_THREADS)
};

struct SweepRow {
  double axis_value = 0.0;
  std::optional<double> outage_cf;
  std::optional<double> outage_mc;
  std::optional<double> mc_ci;
  std::string cf_flags;
};

class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One row per grid point, in grid order. Closed-form failures at single
// points land in cf_flags; scenario-level problems throw SweepError.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// `axis,axis_value,outage_cf,outage_mc,mc_ci,flags`, one row per
// SweepRow, 10 significant digits, byte-deterministic.
void emit_csv(const std::vector<SweepRow>& rows, Axis axis, std::ostream& os);
void emit_csv(const std::vector<SweepRow>& rows, Axis axis, const std::string& path);

struct AgreementPoint {
  double axis_value = 0.0;
  double cf = 0.0;
  double mc = 0.0;
  double ci = 0.0;
  double gap = 0.0;        // |cf - mc|
  double threshold = 0.0;  // max(0.02, 3*ci)
  bool agree = false;
};

struct AgreementReport {
  std::vector<AgreementPoint> points;
  bool all_agree = true;
  std::size_t worst = 0;  // index of the largest gap/threshold ratio

  std::string render(std::string_view title) const;
};

// Per-row |cf - mc| against max(0.02, 3*ci). A diverge verdict is a
// documented finding, not an error.
AgreementReport agreement_report(const std::vector<SweepRow>& rows);

}  // namespace ris::sweep
