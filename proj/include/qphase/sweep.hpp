#pragma once

// One-parameter sweeps of a field metric. Every point is a pure function of
// the resolved spec, so points are evaluated on worker threads and written
// into pre-sized slots; the row order is always ascending x.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qphase/errors.hpp"
#include "qphase/model_core.hpp"
#include "qphase/moments.hpp"
#include "qphase/phase_analysis.hpp"

namespace qphase {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Invalid sweep specification or configuration; maps to the usage exit code.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class SweepVariable { Alpha, Gt, Delta, Theta, Theta1, BetaAbs };
enum class Metric { PTheta, Dispersion, U, S, QPrime, Husimi, AngularQ, G2, NBar };

inline std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::Alpha: return "alpha";
    case SweepVariable::Gt: return "gt";
    case SweepVariable::Delta: return "delta";
    case SweepVariable::Theta: return "theta";
    case SweepVariable::Theta1: return "theta1";
    case SweepVariable::BetaAbs: return "beta_abs";
  }
  return "?";
}

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::PTheta: return "ptheta";
    case Metric::Dispersion: return "dispersion";
    case Metric::U: return "U";
    case Metric::S: return "S";
    case Metric::QPrime: return "Qprime";
    case Metric::Husimi: return "husimi";
    case Metric::AngularQ: return "angularq";
    case Metric::G2: return "g2";
    case Metric::NBar: return "nbar";
  }
  return "?";
}

inline SweepVariable parse_sweep_variable(std::string_view s) {
  for (auto v : {SweepVariable::Alpha, SweepVariable::Gt, SweepVariable::Delta, SweepVariable::Theta,
                 SweepVariable::Theta1, SweepVariable::BetaAbs})
    if (s == to_string(v)) return v;
  if (s == "beta") return SweepVariable::BetaAbs;
  throw ConfigError("swept: unknown sweep variable '" + std::string(s) + "'");
}

inline Metric parse_metric(std::string_view s) {
  for (auto m : {Metric::PTheta, Metric::Dispersion, Metric::U, Metric::S, Metric::QPrime, Metric::Husimi,
                 Metric::AngularQ, Metric::G2, Metric::NBar})
    if (s == to_string(m)) return m;
  throw ConfigError("metric: unknown metric '" + std::string(s) + "'");
}

struct SweepSpec {
  SweepVariable swept = SweepVariable::Alpha;
  double from = 0.0;
  double to = 1.0;
  int steps = 2;
  Metric metric = Metric::NBar;

  // Fixed values; the swept one must be absent.
  std::optional<double> alpha;
  std::optional<double> g;
  std::optional<double> t;
  std::optional<double> gt;
  std::optional<double> delta;
  std::optional<double> theta;
  std::optional<double> theta1;
  std::optional<double> beta;

  /// Fixed cutoff when set; adaptive truncation otherwise.
  std::optional<std::size_t> nmax;
  double tail_tol = 1e-12;
  std::size_t nmax_ceiling = TruncationPolicy::kDefaultCeiling;

  FieldMode field_mode = FieldMode::PaperCombined;
  FormulaMode formula_mode = FormulaMode::Consistent;

  static constexpr int kMaxSteps = 100000;

  bool metric_uses(SweepVariable v) const {
    switch (v) {
      case SweepVariable::Alpha:
      case SweepVariable::Gt:
      case SweepVariable::Delta: return true;
      case SweepVariable::Theta: return metric == Metric::PTheta;
      case SweepVariable::Theta1: return metric == Metric::AngularQ || metric == Metric::Husimi;
      case SweepVariable::BetaAbs: return metric == Metric::Husimi;
    }
    return false;
  }

  std::optional<double> fixed_value(SweepVariable v) const {
    switch (v) {
      case SweepVariable::Alpha: return alpha;
      case SweepVariable::Gt: return gt;
      case SweepVariable::Delta: return delta;
      case SweepVariable::Theta: return theta;
      case SweepVariable::Theta1: return theta1;
      case SweepVariable::BetaAbs: return beta;
    }
    return std::nullopt;
  }

  void validate() const {
    if (!std::isfinite(from) || !std::isfinite(to) || !(from < to)) throw ConfigError("from/to: require from < to");
    if (steps < 2 || steps > kMaxSteps) throw ConfigError("steps: must lie in [2, 100000]");
    if (!metric_uses(swept))
      throw ConfigError("swept: '" + std::string(to_string(swept)) + "' does not affect metric '" +
                        std::string(to_string(metric)) + "'");
    if (fixed_value(swept))
      throw ConfigError(std::string(to_string(swept)) + ": fixed value given for the swept parameter");

    const bool time_swept = swept == SweepVariable::Gt;
    if (gt && (t || g)) throw ConfigError("gt: give exactly one time convention, either gt or g and t");
    if (time_swept && (t || g)) throw ConfigError("gt: swept gt excludes fixed g and t");
    if (!time_swept && !gt && !t) throw ConfigError("t: missing time (give gt, or g and t)");
    if (g && !(*g > 0.0)) throw ConfigError("g: must be > 0");
    if (t && !(*t >= 0.0)) throw ConfigError("t: must be >= 0");
    if (gt && !(*gt >= 0.0)) throw ConfigError("gt: must be >= 0");
    if (time_swept && from < 0.0) throw ConfigError("from: gt must be >= 0");
    if (swept == SweepVariable::BetaAbs && from < 0.0) throw ConfigError("from: beta_abs must be >= 0");
    if (swept != SweepVariable::Alpha && !alpha) throw ConfigError("alpha: missing required parameter");
    if (metric == Metric::PTheta && swept != SweepVariable::Theta && !theta)
      throw ConfigError("theta: missing required parameter for metric ptheta");
    if (metric == Metric::AngularQ && swept != SweepVariable::Theta1 && !theta1)
      throw ConfigError("theta1: missing required parameter for metric angularq");
    if (metric == Metric::Husimi && swept != SweepVariable::BetaAbs && !beta)
      throw ConfigError("beta: missing required parameter for metric husimi");
    if (nmax && *nmax < 8) throw ConfigError("nmax: must be >= 8");
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw ConfigError("tail_tol: must lie in (0, 1)");
  }

  /// x_i = from + (to - from) i / (steps - 1), endpoints exact.
  double x_at(int i) const {
    if (i == steps - 1) return to;
    return from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
};

/// Everything needed to evaluate the metric at one sweep point.
struct SweepPoint {
  ModelParams params;
  TruncationPolicy truncation;
  double theta = 0.0;
  double theta1 = 0.0;
  double beta_abs = 0.0;
};

inline SweepPoint resolve_point(const SweepSpec& spec, double x) {
  SweepPoint p;
  auto pick = [&](SweepVariable v, std::optional<double> fixed, double fallback) {
    return spec.swept == v ? x : fixed.value_or(fallback);
  };
  p.params.alpha = pick(SweepVariable::Alpha, spec.alpha, 0.0);
  p.params.delta = pick(SweepVariable::Delta, spec.delta, 0.0);
  if (spec.swept == SweepVariable::Gt || spec.gt) {
    p.params.g = 1.0;
    p.params.t = pick(SweepVariable::Gt, spec.gt, 0.0);
  } else {
    p.params.g = spec.g.value_or(1.0);
    p.params.t = *spec.t;
  }
  p.theta = pick(SweepVariable::Theta, spec.theta, 0.0);
  p.theta1 = pick(SweepVariable::Theta1, spec.theta1, 0.0);
  p.beta_abs = pick(SweepVariable::BetaAbs, spec.beta, 0.0);

  p.truncation.tail_tolerance = spec.tail_tol;
  p.truncation.ceiling = spec.nmax_ceiling;
  if (spec.nmax) {
    p.truncation.mode = TruncationMode::Fixed;
    p.truncation.n_max = *spec.nmax;
  } else if (spec.metric == Metric::Husimi) {
    // Raise the adaptive floor so the coherent-state series guard holds.
    const double b = p.beta_abs;
    const auto need = static_cast<std::size_t>(std::floor(b * b + 6.0 * b)) + 1;
    p.truncation.n_max = std::max(p.truncation.n_max, need);
  }
  return p;
}

struct SweepRow {
  double x = 0.0;
  std::optional<double> value;
  std::string status = "ok";

  bool operator==(const SweepRow&) const = default;
};

inline std::string undefined_status(std::string reason) {
  for (char& c : reason)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return "undefined:" + reason;
}

struct PointOutcome {
  SweepRow row;
  std::size_t n_max = 0;
  double tail_mass = 0.0;
  std::optional<std::string> truncation_failure;
};

// S stays defined for phase-symmetric states even though U and Q' do not.
inline double fluctuation_parameters_metric(const FieldAmplitudes& field, FormulaMode mode, Metric which) {
  const auto partial = evaluate_fluctuations(field, mode);
  if (which == Metric::U) {
    if (partial.undefined_U) throw UndefinedQuantity("U", *partial.undefined_U);
    return partial.report.U;
  }
  if (which == Metric::QPrime) {
    if (partial.undefined_Q_prime) throw UndefinedQuantity("Qprime", *partial.undefined_Q_prime);
    return partial.report.Q_prime;
  }
  return partial.report.S_param;
}

inline double evaluate_metric(const SweepSpec& spec, const SweepPoint& point, const FieldAmplitudes& field) {
  switch (spec.metric) {
    case Metric::PTheta: return phase_density(field, point.theta);
    case Metric::Dispersion: return phase_dispersion(field);
    case Metric::U: return fluctuation_parameters_metric(field, spec.formula_mode, Metric::U);
    case Metric::S: return fluctuation_parameters_metric(field, spec.formula_mode, Metric::S);
    case Metric::QPrime: return fluctuation_parameters_metric(field, spec.formula_mode, Metric::QPrime);
    case Metric::Husimi: return husimi_q(field, std::polar(point.beta_abs, point.theta1));
    case Metric::AngularQ: return angular_q(field, point.theta1);
    case Metric::G2: return g2_zero(field);
    case Metric::NBar: return mean_photon_number(field);
  }
  throw ConfigError("metric: unhandled");
}

inline PointOutcome evaluate_point(const SweepSpec& spec, double x) {
  PointOutcome out;
  out.row.x = x;
  const SweepPoint point = resolve_point(spec, x);
  try {
    const JointAmplitudes joint = evolve_amplitudes(point.params, point.truncation);
    out.n_max = joint.n_max();
    out.tail_mass = joint.tail_mass;
    const FieldAmplitudes field = field_amplitudes(joint, spec.field_mode);
    out.row.value = evaluate_metric(spec, point, field);
  } catch (const TruncationError& e) {
    out.truncation_failure = e.what();
    out.row.status = undefined_status(std::string("truncation: ") + e.what());
  } catch (const UndefinedQuantity& e) {
    out.row.status = undefined_status(e.what());
  } catch (const DomainError& e) {
    out.row.status = undefined_status(e.what());
  }
  return out;
}

struct TruncationSummary {
  std::size_t n_max_min = 0;
  std::size_t n_max_max = 0;
  double tail_mass_max = 0.0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  TruncationSummary truncation;
  double wall_time_s = 0.0;
  /// Set when a point hit the truncation ceiling; rows stop before that point.
  std::optional<std::string> failure;
};

inline SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0) {
  spec.validate();
  const auto started = std::chrono::steady_clock::now();
  const auto count = static_cast<std::size_t>(spec.steps);
  std::vector<PointOutcome> outcomes(count);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += threads)
          outcomes[i] = evaluate_point(spec, spec.x_at(static_cast<int>(i)));
      });
    }
  }

  SweepResult result;
  result.spec = spec;
  bool first = true;
  for (const auto& o : outcomes) {
    if (o.truncation_failure) {
      result.failure = *o.truncation_failure;
      break;
    }
    result.rows.push_back(o.row);
    if (o.n_max == 0) continue;
    if (first) {
      result.truncation = {o.n_max, o.n_max, o.tail_mass};
      first = false;
    } else {
      result.truncation.n_max_min = std::min(result.truncation.n_max_min, o.n_max);
      result.truncation.n_max_max = std::max(result.truncation.n_max_max, o.n_max);
      result.truncation.tail_mass_max = std::max(result.truncation.tail_mass_max, o.tail_mass);
    }
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

/// Ceiling from QPHASE_NMAX_CEILING, or the default when unset.
inline std::size_t ceiling_from_env() {
  const char* raw = std::getenv("QPHASE_NMAX_CEILING");
  if (raw == nullptr || *raw == '\0') return TruncationPolicy::kDefaultCeiling;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 8)
    throw ConfigError("QPHASE_NMAX_CEILING: expected an integer >= 8, got '" + std::string(raw) + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace qphase
