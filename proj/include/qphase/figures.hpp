#pragma once

// Bundled parameter sets for regenerating figure data. Each figure is a list
// of panels; each panel is a list of curves, and each curve is one sweep.
// Every curve is emitted once per field mode.

#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "qphase/io.hpp"
#include "qphase/sweep.hpp"

namespace qphase::figures {

using io::json;

struct Curve {
  std::string label;
  SweepSpec spec;
};

struct Panel {
  std::string id;
  std::string xlabel;
  std::string ylabel;
  std::vector<Curve> curves;
};

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"1a", "1b", "1c", "2a", "2b", "3", "4", "5"};
  return ids;
}

/// Phase angles of the P(theta) curves in figure 1 and the reported peak
/// values of figure 1(a) at gt = 3.
struct ThetaCurve {
  const char* label;
  double theta;
  double reported_peak;
};

inline constexpr double kPi = std::numbers::pi;
inline const ThetaCurve kFigure1Thetas[] = {
    {"theta=pi/2", kPi / 2, 0.22},
    {"theta=pi", kPi, 0.22},
    {"theta=3pi/2", 3 * kPi / 2, 0.83},
    {"theta=2pi", 2 * kPi, 6.77},
};

inline constexpr int kCurveSteps = 201;

namespace detail {

inline SweepSpec base(Metric metric, SweepVariable swept, double from, double to) {
  SweepSpec s;
  s.metric = metric;
  s.swept = swept;
  s.from = from;
  s.to = to;
  s.steps = kCurveSteps;
  return s;
}

}  // namespace detail

inline std::vector<Panel> figure_panels(const std::string& id) {
  using detail::base;
  std::vector<Panel> panels;
  if (id == "1a" || id == "1b") {
    Panel p{"fig" + id, id == "1a" ? "alpha" : "gt", "P_theta", {}};
    for (const auto& tc : kFigure1Thetas) {
      SweepSpec s = id == "1a" ? base(Metric::PTheta, SweepVariable::Alpha, 0.0, 2.0)
                               : base(Metric::PTheta, SweepVariable::Gt, 0.0, 10.0);
      if (id == "1a") s.gt = 3.0; else s.alpha = 1.0;
      s.theta = tc.theta;
      p.curves.push_back({tc.label, s});
    }
    panels.push_back(std::move(p));
  } else if (id == "1c") {
    SweepSpec s = base(Metric::PTheta, SweepVariable::Theta, -kPi, kPi);
    s.gt = 2.0;
    s.alpha = 1.0;
    panels.push_back({"fig1c", "theta", "P_theta", {{"gt=2,alpha=1", s}}});
  } else if (id == "2a" || id == "2b") {
    Panel p{"fig" + id, id == "2a" ? "alpha" : "gt", "P", {}};
    for (auto metric : {Metric::S, Metric::QPrime, Metric::U}) {
      for (auto formula : {FormulaMode::Consistent, FormulaMode::PaperLiteral}) {
        SweepSpec s = id == "2a" ? base(metric, SweepVariable::Alpha, 0.0, 2.0)
                                 : base(metric, SweepVariable::Gt, 0.0, 10.0);
        if (id == "2a") s.gt = 3.0; else s.alpha = 1.0;
        s.formula_mode = formula;
        p.curves.push_back({std::string(to_string(metric)) + "_" + std::string(to_string(formula)), s});
      }
    }
    panels.push_back(std::move(p));
  } else if (id == "3") {
    SweepSpec qa = base(Metric::Husimi, SweepVariable::Alpha, 0.0, 5.0);
    qa.gt = 2.0;
    qa.beta = 2.0;
    SweepSpec qb = base(Metric::Husimi, SweepVariable::Gt, 0.0, 10.0);
    qb.alpha = 1.0;
    qb.beta = 2.0;
    SweepSpec qc = base(Metric::Husimi, SweepVariable::BetaAbs, 0.0, 5.0);
    qc.alpha = 1.0;
    qc.gt = 4.0;
    SweepSpec aa = base(Metric::AngularQ, SweepVariable::Alpha, 0.0, 5.0);
    aa.gt = 1.0;
    aa.theta1 = 1.0;
    SweepSpec ab = base(Metric::AngularQ, SweepVariable::Gt, 0.0, 10.0);
    ab.alpha = 1.0;
    ab.theta1 = 1.0;
    SweepSpec ac = base(Metric::AngularQ, SweepVariable::Theta1, 0.0, 2 * kPi);
    ac.alpha = 1.0;
    ac.gt = 1.0;
    panels.push_back({"fig3_husimi_a", "alpha", "Q", {{"gt=2,beta=2", qa}}});
    panels.push_back({"fig3_husimi_b", "gt", "Q", {{"alpha=1,beta=2", qb}}});
    panels.push_back({"fig3_husimi_c", "beta", "Q", {{"alpha=1,gt=4", qc}}});
    panels.push_back({"fig3_angular_a", "alpha", "Q_theta1", {{"gt=1,theta1=1", aa}}});
    panels.push_back({"fig3_angular_b", "gt", "Q_theta1", {{"alpha=1,theta1=1", ab}}});
    panels.push_back({"fig3_angular_c", "theta1", "Q_theta1", {{"alpha=1,gt=1", ac}}});
  } else if (id == "4") {
    SweepSpec da = base(Metric::Dispersion, SweepVariable::Alpha, 0.0, 2.0);
    da.gt = 2.0;
    SweepSpec db = base(Metric::Dispersion, SweepVariable::Gt, 0.0, 10.0);
    db.alpha = 1.0;
    panels.push_back({"fig4a", "alpha", "D", {{"gt=2", da}}});
    panels.push_back({"fig4b", "gt", "D", {{"alpha=1", db}}});
  } else if (id == "5") {
    SweepSpec ga = base(Metric::G2, SweepVariable::Alpha, 0.01, 2.0);
    ga.gt = 3.0;
    SweepSpec gb = base(Metric::G2, SweepVariable::Gt, 0.0, 10.0);
    gb.alpha = 1.0;
    panels.push_back({"fig5a", "alpha", "g2(0)", {{"gt=3", ga}}});
    panels.push_back({"fig5b", "gt", "g2(0)", {{"alpha=1", gb}}});
  } else {
    throw ConfigError("figure: unknown figure id '" + id + "'");
  }
  return panels;
}

struct PeakComparison {
  std::string label;
  double reported = 0.0;
  double computed = 0.0;
  double relative_error = 0.0;
};

struct Figure1aCheck {
  std::vector<PeakComparison> peaks;
  /// theta = pi/2 and pi agree, 3pi/2 above them, 2pi strictly largest.
  bool ordering_matches = false;
  /// Every peak within 10% of the reported value.
  bool strict_match = false;
};

/// Peak P(theta) over alpha in [0, 2] at gt = 3 for each figure-1 angle.
inline Figure1aCheck figure_1a_peaks(FieldMode mode = FieldMode::PaperCombined, unsigned threads = 0) {
  Figure1aCheck check;
  const auto panels = figure_panels("1a");
  for (const auto& curve : panels.front().curves) {
    SweepSpec s = curve.spec;
    s.field_mode = mode;
    const auto result = run_sweep(s, threads);
    double peak = -1.0;
    for (const auto& r : result.rows)
      if (r.value) peak = std::max(peak, *r.value);
    double reported = 0.0;
    for (const auto& tc : kFigure1Thetas)
      if (curve.label == tc.label) reported = tc.reported_peak;
    check.peaks.push_back({curve.label, reported, peak, std::abs(peak - reported) / reported});
  }
  const auto& p = check.peaks;
  const double tol = 1e-9;
  check.ordering_matches = std::abs(p[0].computed - p[1].computed) <= tol * std::max(1.0, p[0].computed) &&
                           p[2].computed >= p[1].computed - tol && p[3].computed > p[2].computed &&
                           p[3].computed > p[0].computed;
  check.strict_match = true;
  for (const auto& c : p) check.strict_match = check.strict_match && c.relative_error <= 0.10;
  return check;
}

inline json to_json(const Figure1aCheck& c) {
  json j;
  j["peaks"] = json::array();
  for (const auto& p : c.peaks)
    j["peaks"].push_back({{"curve", p.label}, {"reported", p.reported}, {"computed", p.computed},
                          {"relative_error", p.relative_error}});
  j["ordering_matches"] = c.ordering_matches;
  j["strict_match"] = c.strict_match;
  j["status"] = c.strict_match ? "pass-strict" : c.ordering_matches ? "pass-qualitative" : "fail";
  if (!c.strict_match)
    j["discrepancy"] =
        "peak values differ from the reported ones by more than 10%; the plotting normalization behind the "
        "reported values is not recoverable from the stated P(theta) formula";
  return j;
}

struct FigureOutput {
  std::vector<std::string> files;
  bool truncation_failure = false;
  json summary;
};

inline std::string file_stem(const Panel& panel, const Curve& curve, FieldMode mode) {
  std::string stem = panel.id + "_" + curve.label + "_" + std::string(to_string(mode));
  for (char& c : stem) {
    if (c == '=') c = '-';
    if (c == '/' || c == ',') c = '_';
  }
  return stem;
}

/// Runs every curve of figure `id` in both field modes and writes CSV data,
/// per-curve manifests, a gnuplot script per panel and mode, and a summary
/// manifest `fig<id>_manifest.json` into `out_dir`.
inline FigureOutput reproduce_figure(const std::string& id, const std::filesystem::path& out_dir,
                                     std::size_t ceiling = TruncationPolicy::kDefaultCeiling, unsigned threads = 0) {
  FigureOutput out;
  out.summary["figure"] = id;
  out.summary["tool_version"] = std::string(kToolVersion);
  out.summary["panels"] = json::array();
  for (const auto& panel : figure_panels(id)) {
    for (auto mode : {FieldMode::PaperCombined, FieldMode::PartialTrace}) {
      json panel_json{{"panel", panel.id}, {"field_mode", std::string(to_string(mode))}, {"curves", json::array()}};
      std::vector<io::PlotCurve> plot;
      for (const auto& curve : panel.curves) {
        SweepSpec s = curve.spec;
        s.field_mode = mode;
        s.nmax_ceiling = ceiling;
        const auto result = run_sweep(s, threads);
        const auto stem = file_stem(panel, curve, mode);
        const auto csv = out_dir / (stem + ".csv");
        auto files = io::emit(result.rows, io::make_manifest(result), io::Format::Csv, csv);
        out.files.insert(out.files.end(), files.begin(), files.end());
        out.truncation_failure = out.truncation_failure || result.failure.has_value();
        panel_json["curves"].push_back({{"label", curve.label}, {"csv", csv.filename().string()}});
        plot.push_back({csv.filename().string(), curve.label});
      }
      const auto script = out_dir / (panel.id + "_" + std::string(to_string(mode)) + ".gp");
      io::write_text(script, io::gnuplot_script(plot, panel.xlabel, panel.ylabel));
      out.files.push_back(script.string());
      panel_json["script"] = script.filename().string();
      out.summary["panels"].push_back(panel_json);
    }
  }
  if (id == "1a") {
    out.summary["figure_comparison"] = to_json(figure_1a_peaks(FieldMode::PaperCombined, threads));
    out.summary["figure_comparison_partial_trace"] = to_json(figure_1a_peaks(FieldMode::PartialTrace, threads));
  }
  const auto manifest = out_dir / ("fig" + id + "_manifest.json");
  out.files.push_back(manifest.string());
  out.summary["outputs"] = out.files;
  io::write_text(manifest, out.summary.dump(2) + "\n");
  return out;
}

}  // namespace qphase::figures
