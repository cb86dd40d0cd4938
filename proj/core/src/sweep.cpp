#include "ris/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ris/closedform.hpp"
#include "ris/montecarlo.hpp"
#include "ris/rng.hpp"

namespace ris::sweep {
namespace {

constexpr std::uint64_t kPointSeedTag = 0x706f696e74ull;  // "point"

std::string fmt10(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string sanitize_flags(std::string s) {
  for (auto& c : s) {
    if (c == ',' || c == '\n') c = ';';
  }
  return s;
}

model::Scenario variant_at(const model::Scenario& base, Axis axis, double value) {
  model::Scenario v = base;
  v.validated = false;
  v.blocks.clear();
  switch (axis) {
    case Axis::avg_snr_lambda:
      v.lambda_u = value;
      v.lambda_b = value;
      break;
    case Axis::fail_prob:
      v.fail_prob = value;
      break;
    case Axis::n_elements:
      v.elements_per_ris = static_cast<int>(value);
      break;
    case Axis::dist_user:
      v.dist_user_m = value;
      break;
    case Axis::gamma_t:
      v.target_rate.reset();
      v.gamma_t_in = value;
      break;
  }
  return model::validate(std::move(v));
}

void check_spec(const SweepSpec& spec) {
  if (spec.grid.empty()) throw SweepError("sweep: grid must be nonempty");
  for (std::size_t i = 1; i < spec.grid.size(); ++i) {
    if (!(spec.grid[i] > spec.grid[i - 1])) {
      throw SweepError("sweep: grid must be strictly increasing (violated at position " +
                       std::to_string(i) + ")");
    }
  }
  if (!spec.run_cf && !spec.run_mc) throw SweepError("sweep: at least one method required");
  if (spec.axis == Axis::n_elements) {
    for (double g : spec.grid) {
      if (g < 1.0 || g != std::floor(g)) {
        throw SweepError("sweep: n_elements grid values must be positive integers, got " + fmt10(g));
      }
      const int j = spec.fixed.blocks_per_ris;
      if (j >= 1 && static_cast<int>(g) % j != 0) {
        throw SweepError("sweep: n_elements grid value " + fmt10(g) +
                         " is not divisible by blocks_per_ris = " + std::to_string(j));
      }
    }
  }
}

}  // namespace

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::avg_snr_lambda: return "avg_snr_lambda";
    case Axis::fail_prob: return "fail_prob";
    case Axis::n_elements: return "n_elements";
    case Axis::dist_user: return "dist_user";
    case Axis::gamma_t: return "gamma_t";
  }
  return "?";
}

std::optional<Axis> axis_from_string(std::string_view name) {
  if (name == "avg_snr_lambda") return Axis::avg_snr_lambda;
  if (name == "fail_prob") return Axis::fail_prob;
  if (name == "n_elements") return Axis::n_elements;
  if (name == "dist_user") return Axis::dist_user;
  if (name == "gamma_t") return Axis::gamma_t;
  return std::nullopt;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  check_spec(spec);

  // the precondition is that the scenario is valid at every grid point, so
  // surface bad points before any evaluation
  std::vector<model::Scenario> variants;
  variants.reserve(spec.grid.size());
  for (double g : spec.grid) {
    try {
      variants.push_back(variant_at(spec.fixed, spec.axis, g));
    } catch (const model::ValidationError& e) {
      throw SweepError("sweep: scenario invalid at " + to_string(spec.axis) + " = " + fmt10(g) +
                       ": " + e.what());
    }
  }

  std::vector<SweepRow> rows(spec.grid.size());
  for (std::size_t i = 0; i < spec.grid.size(); ++i) rows[i].axis_value = spec.grid[i];

  if (spec.run_cf) {
    for (std::size_t i = 0; i < variants.size(); ++i) {
      try {
        const auto r = closedform::outage_with_failures(variants[i], variants[i].blocks.front());
        rows[i].outage_cf = r.probability;
        rows[i].cf_flags = r.flags();
      } catch (const std::exception& e) {
        rows[i].cf_flags = sanitize_flags(std::string("error: ") + e.what());
      }
    }
  }

  if (spec.run_mc) {
    if (spec.axis == Axis::gamma_t && spec.crn) {
      // one set of trial draws shared by every threshold
      montecarlo::Engine eng(spec.fixed);
      const auto est = eng.estimate_outage_multi(spec.grid, spec.trials, spec.seed, spec.workers);
      for (std::size_t i = 0; i < est.size(); ++i) {
        rows[i].outage_mc = est[i].outage_prob;
        rows[i].mc_ci = est[i].ci_halfwidth;
      }
    } else {
      for (std::size_t i = 0; i < variants.size(); ++i) {
        const std::uint64_t pseed =
            spec.crn ? spec.seed : rng::derive_stream(spec.seed, kPointSeedTag, i, 0);
        montecarlo::Engine eng(variants[i]);
        const auto est = eng.estimate_outage(variants[i].gamma_t, spec.trials, pseed, spec.workers);
        rows[i].outage_mc = est.outage_prob;
        rows[i].mc_ci = est.ci_halfwidth;
      }
    }
  }
  return rows;
}

void emit_csv(const std::vector<SweepRow>& rows, Axis axis, std::ostream& os) {
  os << "axis,axis_value,outage_cf,outage_mc,mc_ci,flags\n";
  const std::string name = to_string(axis);
  for (const auto& r : rows) {
    os << name << ',' << fmt10(r.axis_value) << ',';
    if (r.outage_cf) os << fmt10(*r.outage_cf);
    os << ',';
    if (r.outage_mc) os << fmt10(*r.outage_mc);
    os << ',';
    if (r.mc_ci) os << fmt10(*r.mc_ci);
    os << ',' << sanitize_flags(r.cf_flags) << '\n';
  }
}

void emit_csv(const std::vector<SweepRow>& rows, Axis axis, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path + " for writing");
  emit_csv(rows, axis, out);
  out.flush();
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

AgreementReport agreement_report(const std::vector<SweepRow>& rows) {
  AgreementReport rep;
  double worst_ratio = -1.0;
  for (const auto& r : rows) {
    if (!r.outage_cf || !r.outage_mc) continue;
    AgreementPoint p;
    p.axis_value = r.axis_value;
    p.cf = *r.outage_cf;
    p.mc = *r.outage_mc;
    p.ci = r.mc_ci.value_or(0.0);
    p.gap = std::abs(p.cf - p.mc);
    p.threshold = std::max(0.02, 3.0 * p.ci);
    p.agree = p.gap <= p.threshold;
    if (!p.agree) rep.all_agree = false;
    const double ratio = p.gap / p.threshold;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      rep.worst = rep.points.size();
    }
    rep.points.push_back(p);
  }
  if (rep.points.empty()) throw SweepError("agreement_report: no rows carry both methods");
  return rep;
}

std::string AgreementReport::render(std::string_view title) const {
  std::ostringstream os;
  os << "closed-form vs Monte Carlo agreement: " << title << "\n";
  os << "  axis_value      cf            mc            ci            gap           threshold  status\n";
  for (const auto& p : points) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "  %-12.6g  %-12.6g  %-12.6g  %-12.6g  %-12.6g  %-9.4g  %s\n",
                  p.axis_value, p.cf, p.mc, p.ci, p.gap, p.threshold,
                  p.agree ? "agree" : "DIVERGE");
    os << buf;
  }
  const auto& w = points[worst];
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "verdict: %s (worst point at axis_value=%.6g, gap=%.6g, threshold=%.4g)\n",
                all_agree ? "agree" : "diverge", w.axis_value, w.gap, w.threshold);
  os << buf;
  return os.str();
}

}  // namespace ris::sweep
