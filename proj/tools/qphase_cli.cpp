// qphase: command-line front end for the driven atom-cavity phase diagnostics.
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure (truncation
// ceiling hit), 1 anything else (I/O).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "qphase/figures.hpp"
#include "qphase/io.hpp"
#include "qphase/qphase.hpp"
#include "qphase/sweep.hpp"

namespace {

using qphase::io::json;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::optional<double> alpha, g, delta, t, gt, theta, theta1, beta, from, to, tail_tol;
  std::optional<long long> nmax, steps;
  std::optional<std::string> metric, sweep, field_mode, formula_mode;
  std::string format = "csv";
  std::optional<std::string> out, config, manifest, plot_script;
  unsigned threads = 0;
};

void add_point_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--alpha", f.alpha, "Coherent amplitude alpha (real)");
  cmd->add_option("--g", f.g, "Coupling g");
  cmd->add_option("--delta", f.delta, "Detuning delta");
  cmd->add_option("--t", f.t, "Time t (with --g)");
  cmd->add_option("--gt", f.gt, "Dimensionless time gt (g = 1)");
  cmd->add_option("--nmax", f.nmax, "Fixed Fock cutoff (adaptive when omitted)");
  cmd->add_option("--tail-tol", f.tail_tol, "Adaptive truncation tail tolerance");
  cmd->add_option("--field-mode", f.field_mode, "paper-combined | partial-trace");
  cmd->add_option("--formula-mode", f.formula_mode, "consistent | paper-literal");
  cmd->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", f.out, "Output path (stdout when omitted)");
}

void add_metric_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--theta", f.theta, "Phase angle theta");
  cmd->add_option("--theta1", f.theta1, "Angle theta1 of beta");
  cmd->add_option("--beta", f.beta, "|beta|");
}

void add_sweep_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--sweep", f.sweep, "Swept parameter: alpha gt delta theta theta1 beta_abs");
  cmd->add_option("--from", f.from, "Sweep start");
  cmd->add_option("--to", f.to, "Sweep end");
  cmd->add_option("--steps", f.steps, "Number of sweep points");
  cmd->add_option("--config", f.config, "Flat JSON config; flags override it");
  cmd->add_option("--manifest", f.manifest, "Re-run the resolved parameters of a manifest");
  cmd->add_option("--plot-script", f.plot_script, "Also write a gnuplot script for the CSV");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = hardware)");
}

json overrides_from(const Flags& f) {
  json j = json::object();
  auto put = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  put("alpha", f.alpha);
  put("g", f.g);
  put("delta", f.delta);
  put("t", f.t);
  put("gt", f.gt);
  put("theta", f.theta);
  put("theta1", f.theta1);
  put("beta", f.beta);
  put("from", f.from);
  put("to", f.to);
  put("tail_tol", f.tail_tol);
  put("nmax", f.nmax);
  put("steps", f.steps);
  put("metric", f.metric);
  put("swept", f.sweep);
  put("field_mode", f.field_mode);
  put("formula_mode", f.formula_mode);
  return j;
}

void print_or_write(const std::string& text, const std::optional<std::string>& out) {
  if (out) {
    qphase::io::write_text(*out, text);
  } else {
    std::cout << text;
  }
}

int run_sweep_command(const Flags& f, std::optional<std::string> preset_metric) {
  json file_doc = json::object();
  if (f.manifest) file_doc = qphase::io::resolved_from_manifest(qphase::io::read_json_file(*f.manifest));
  if (f.config) {
    json cfg = qphase::io::read_json_file(*f.config);
    for (const auto& [k, v] : cfg.items()) file_doc[k] = v;
  }
  json overrides = overrides_from(f);
  if (preset_metric && !overrides.contains("metric") && !file_doc.contains("metric"))
    overrides["metric"] = *preset_metric;

  const auto spec = qphase::io::spec_from_json(file_doc, overrides, qphase::ceiling_from_env());
  const auto result = qphase::run_sweep(spec, f.threads);
  const auto manifest = qphase::io::make_manifest(result);
  const auto format = qphase::io::parse_format(f.format);

  if (f.out) {
    qphase::io::emit(result.rows, manifest, format, *f.out);
    if (f.plot_script) {
      const std::filesystem::path csv(*f.out);
      qphase::io::write_text(*f.plot_script,
                             qphase::io::gnuplot_script({{csv.string(), std::string(qphase::to_string(spec.metric))}},
                                                        std::string(qphase::to_string(spec.swept)),
                                                        std::string(qphase::to_string(spec.metric))));
    }
  } else {
    std::cout << (format == qphase::io::Format::Csv ? qphase::io::format_csv(result.rows)
                                                    : qphase::io::format_json(result.rows, manifest));
  }
  if (result.failure) {
    std::cerr << "numerical failure: " << *result.failure << "\n";
    return kExitNumerical;
  }
  return 0;
}

qphase::ModelParams point_params(const Flags& f) {
  if (!f.alpha) throw qphase::ConfigError("alpha: missing required parameter");
  if (f.gt && (f.t || f.g)) throw qphase::ConfigError("gt: give exactly one time convention, either gt or g and t");
  if (!f.gt && !f.t) throw qphase::ConfigError("t: missing time (give gt, or g and t)");
  qphase::ModelParams p;
  p.alpha = *f.alpha;
  p.delta = f.delta.value_or(0.0);
  p.g = f.gt ? 1.0 : f.g.value_or(1.0);
  p.t = f.gt ? *f.gt : *f.t;
  p.validate();
  return p;
}

qphase::TruncationPolicy point_truncation(const Flags& f, double beta_abs = 0.0) {
  qphase::TruncationPolicy tp;
  tp.ceiling = qphase::ceiling_from_env();
  if (f.tail_tol) tp.tail_tolerance = *f.tail_tol;
  if (f.nmax) {
    if (*f.nmax < 8) throw qphase::ConfigError("nmax: must be >= 8");
    tp.mode = qphase::TruncationMode::Fixed;
    tp.n_max = static_cast<std::size_t>(*f.nmax);
  } else {
    tp.n_max = std::max<std::size_t>(tp.n_max, static_cast<std::size_t>(beta_abs * beta_abs + 6.0 * beta_abs) + 1);
  }
  return tp;
}

qphase::FieldAmplitudes point_field(const Flags& f, double beta_abs = 0.0) {
  const auto joint = qphase::evolve_amplitudes(point_params(f), point_truncation(f, beta_abs));
  const auto mode = f.field_mode ? qphase::parse_field_mode(*f.field_mode) : qphase::FieldMode::PaperCombined;
  return qphase::field_amplitudes(joint, mode);
}

json point_header(const qphase::FieldAmplitudes& field) {
  const auto& p = field.source.params;
  return {{"alpha", p.alpha.real()}, {"g", p.g},      {"t", p.t}, {"delta", p.delta},
          {"n_max", field.n_max()},  {"tail_mass", field.tail_mass()},
          {"field_mode", std::string(qphase::to_string(field.mode))}, {"field_norm", field.norm()}};
}

std::string format_value(const json& doc, const std::string& format, const char* key) {
  if (format == "json") return doc.dump(2) + "\n";
  const auto& v = doc.at(key);
  return v.is_null() ? std::string("undefined:") + doc.value("reason", "") + "\n"
                     : qphase::io::format_double(v.get<double>()) + "\n";
}

int amplitudes_command(const Flags& f) {
  const auto joint = qphase::evolve_amplitudes(point_params(f), point_truncation(f));
  const auto field = qphase::field_amplitudes(joint, qphase::FieldMode::PaperCombined);
  const auto& d = field.d();
  using qphase::io::format_double;
  if (f.format == "json") {
    json doc = point_header(field);
    doc["joint_norm"] = joint.norm();
    doc["amplitudes"] = json::array();
    for (std::size_t n = 0; n <= joint.n_max(); ++n)
      doc["amplitudes"].push_back({{"n", n},
                                   {"c_a", {joint.c_a[n].real(), joint.c_a[n].imag()}},
                                   {"c_b_next", {joint.c_b[n + 1].real(), joint.c_b[n + 1].imag()}},
                                   {"d", {d[n].real(), d[n].imag()}}});
    print_or_write(doc.dump(2) + "\n", f.out);
  } else {
    std::string text = "n,ca_re,ca_im,cb_next_re,cb_next_im,d_re,d_im\n";
    for (std::size_t n = 0; n <= joint.n_max(); ++n) {
      text += std::to_string(n);
      for (auto v : {joint.c_a[n], joint.c_b[n + 1], d[n]}) text += "," + format_double(v.real()) + "," + format_double(v.imag());
      text += "\n";
    }
    print_or_write(text, f.out);
  }
  return 0;
}

int fluctuations_point(const Flags& f) {
  const auto field = point_field(f);
  const auto mode = f.formula_mode ? qphase::parse_formula_mode(*f.formula_mode) : qphase::FormulaMode::Consistent;
  const auto partial = qphase::evaluate_fluctuations(field, mode);
  const auto& r = partial.report;
  json doc = point_header(field);
  doc["formula_mode"] = std::string(qphase::to_string(mode));
  doc["mean_C"] = r.mean_C;
  doc["mean_S"] = r.mean_S;
  doc["mean_C2"] = r.mean_C2;
  doc["mean_S2"] = r.mean_S2;
  doc["var_C"] = r.var_C;
  doc["var_S"] = r.var_S;
  doc["var_N"] = r.var_N;
  doc["mean_N"] = r.mean_N;
  doc["S"] = r.S_param;
  doc["U"] = partial.undefined_U ? json(nullptr) : json(r.U);
  doc["Qprime"] = partial.undefined_Q_prime ? json(nullptr) : json(r.Q_prime);
  if (partial.undefined_U) doc["U_reason"] = *partial.undefined_U;
  if (partial.undefined_Q_prime) doc["Qprime_reason"] = *partial.undefined_Q_prime;
  print_or_write(doc.dump(2) + "\n", f.out);
  return 0;
}

template <typename Eval>
int scalar_point(const Flags& f, const char* key, Eval eval, double beta_abs = 0.0) {
  const auto field = point_field(f, beta_abs);
  json doc = point_header(field);
  try {
    doc[key] = eval(field);
  } catch (const qphase::UndefinedQuantity& e) {
    doc[key] = nullptr;
    doc["reason"] = e.what();
  }
  print_or_write(format_value(doc, f.format, key), f.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase diagnostics of a driven atom-cavity field"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qphase::kToolVersion));

  Flags f;
  std::string figure_id;

  auto* amplitudes = app.add_subcommand("amplitudes", "Joint amplitudes c_a, c_b and the combined vector d");
  add_point_flags(amplitudes, f);

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter of a metric");
  add_point_flags(sweep, f);
  add_metric_flags(sweep, f);
  add_sweep_flags(sweep, f);
  sweep->add_option("--metric", f.metric, "ptheta dispersion U S Qprime husimi angularq g2 nbar");

  auto* phase_dist = app.add_subcommand("phase-dist", "Phase distribution P(theta)");
  auto* fluctuations = app.add_subcommand("fluctuations", "Sine/cosine fluctuations and U, S, Q'");
  auto* husimi = app.add_subcommand("husimi", "Husimi Q(beta), beta = |beta| e^{i theta1}");
  auto* angular = app.add_subcommand("angular-q", "Angular Q function");
  auto* dispersion = app.add_subcommand("dispersion", "Phase dispersion D");
  auto* g2 = app.add_subcommand("g2", "Second-order correlation g2(0)");
  for (auto* cmd : {phase_dist, fluctuations, husimi, angular, dispersion, g2}) {
    add_point_flags(cmd, f);
    add_metric_flags(cmd, f);
    add_sweep_flags(cmd, f);
  }
  fluctuations->add_option("--metric", f.metric, "U | S | Qprime (for sweeps)");

  auto* figure = app.add_subcommand("reproduce-figure", "Regenerate the data of one figure");
  figure->add_option("id", figure_id, "1a 1b 1c 2a 2b 3 4 5")->required()->check(CLI::IsMember(qphase::figures::figure_ids()));
  figure->add_option("--out", f.out, "Output directory")->default_str("figures");
  figure->add_option("--threads", f.threads, "Worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*amplitudes) return amplitudes_command(f);
    if (*sweep) return run_sweep_command(f, std::nullopt);
    if (*phase_dist) {
      if (f.sweep) return run_sweep_command(f, "ptheta");
      Flags g = f;
      g.sweep = "theta";
      if (!g.from) g.from = -qphase::figures::kPi;
      if (!g.to) g.to = qphase::figures::kPi;
      if (!g.steps) g.steps = 256;
      return run_sweep_command(g, "ptheta");
    }
    if (*fluctuations) return f.sweep ? run_sweep_command(f, "U") : fluctuations_point(f);
    if (*husimi) {
      if (f.sweep) return run_sweep_command(f, "husimi");
      if (!f.beta) throw qphase::ConfigError("beta: missing required parameter");
      const double b = *f.beta;
      const double phi = f.theta1.value_or(0.0);
      return scalar_point(f, "husimi", [&](const auto& field) { return qphase::husimi_q(field, std::polar(b, phi)); }, b);
    }
    if (*angular) {
      if (f.sweep) return run_sweep_command(f, "angularq");
      if (!f.theta1) throw qphase::ConfigError("theta1: missing required parameter");
      const double th = *f.theta1;
      return scalar_point(f, "angularq", [&](const auto& field) { return qphase::angular_q(field, th); });
    }
    if (*dispersion) {
      if (f.sweep) return run_sweep_command(f, "dispersion");
      return scalar_point(f, "dispersion", [](const auto& field) { return qphase::phase_dispersion(field); });
    }
    if (*g2) {
      if (f.sweep) return run_sweep_command(f, "g2");
      return scalar_point(f, "g2", [](const auto& field) { return qphase::g2_zero(field); });
    }
    if (*figure) {
      const auto out = qphase::figures::reproduce_figure(figure_id, f.out.value_or("figures"),
                                                         qphase::ceiling_from_env(), f.threads);
      for (const auto& file : out.files) std::cout << file << "\n";
      if (out.summary.contains("figure_comparison"))
        std::cout << out.summary["figure_comparison"].dump(2) << "\n";
      return out.truncation_failure ? kExitNumerical : 0;
    }
  } catch (const qphase::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qphase::TruncationError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const qphase::DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
