#include "qmem/run.hpp"

#include <cmath>
#include <filesystem>
#include <functional>

#include <json.hpp>

#include "qmem/csv.hpp"
#include "qmem/errors.hpp"
#include "qmem/metrics.hpp"
#include "qmem/modes.hpp"
#include "qmem/simd.hpp"

#ifndef QMEM_VERSION
#define QMEM_VERSION "0.0.0"
#endif

namespace qmem {

std::string_view version() { return QMEM_VERSION; }

namespace {

using json = nlohmann::ordered_json;

constexpr int kModesExported = 7;
constexpr int kSpectrumPoints = 2001;
constexpr int kSourceSpectrumPoints = 401;

double relative_delta(double fine, double base) {
  const double scale = std::abs(base);
  return scale > 0.0 ? std::abs(fine - base) / scale : std::abs(fine - base);
}

// Frobenius distance between a kernel and the even-node restriction of its
// doubled-grid counterpart, relative to the former.
double kernel_delta(const KernelMatrix& base, const KernelMatrix& doubled) {
  double diff = 0.0, norm = 0.0;
  for (Eigen::Index i = 0; i < base.values.rows(); ++i)
    for (Eigen::Index j = 0; j < base.values.cols(); ++j) {
      const double d = doubled.values(2 * i, 2 * j) - base.values(i, j);
      diff += d * d;
      norm += base.values(i, j) * base.values(i, j);
    }
  return norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff);
}

json model_json(const ModelParams& m) {
  return {{"regime", to_string(m.regime)}, {"L", m.length},     {"T_W", m.write_time}, {"T_R", m.read_time},
          {"direction", to_string(m.direction)}, {"n_t", m.n_t}, {"n_tp", m.n_tp},    {"n_z", m.n_z}};
}

json source_json(const SourceParams& s) {
  json j = {{"kind", to_string(s.kind)}, {"kappa", s.kappa}};
  if (s.kind == SourceKind::laser) {
    j["mu"] = s.mu;
    j["p"] = s.pump_order_p;
  } else {
    j["s"] = s.s;
  }
  j["squeezed_quadrature"] = to_string(s.squeezed_quadrature());
  return j;
}

struct Check {
  std::string name;
  double value;
  double threshold;
  bool upper;  // pass if value <= threshold, else value >= threshold
  bool passed() const { return std::isfinite(value) && (upper ? value <= threshold : value >= threshold); }
};

class Session {
 public:
  Session(const RunConfig& config, std::string outdir) : config_(config), outdir_(std::move(outdir)) {}

  void emit(const std::string& name, const std::string& contents) {
    const std::string path = (std::filesystem::path(outdir_) / name).string();
    write_file(path, contents);
    files_.push_back(path);
  }

  json& results() { return results_; }
  json& deltas() { return deltas_; }
  std::vector<Check>& checks() { return checks_; }
  void warn(std::string w) { warnings_.push_back(std::move(w)); }

  bool all_passed() const {
    for (const auto& c : checks_)
      if (!c.passed()) return false;
    return true;
  }

  std::vector<std::string> finish() {
    json s;
    s["software"] = {{"name", "qmem"}, {"version", version()}, {"isa", simd::isa_name(simd::active_isa())}};
    s["config_hash"] = config_hash(config_);
    s["experiment"] = to_string(config_.experiment);
    json params = {{"model", model_json(config_.model)}};
    if (config_.source) params["source"] = source_json(*config_.source);
    if (config_.sweep)
      params["sweep"] = {{"start", config_.sweep->start}, {"stop", config_.sweep->stop}, {"count", config_.sweep->count}};
    s["parameters"] = params;
    s["results"] = results_.is_null() ? json::object() : results_;
    json checks = json::array();
    for (const auto& c : checks_)
      checks.push_back({{"name", c.name},
                        {"value", c.value},
                        {"threshold", c.threshold},
                        {"comparison", c.upper ? "<=" : ">="},
                        {"passed", c.passed()}});
    s["checks"] = checks;
    s["convergence"] = {{"compared_grid_scale", 2},
                        {"relative_deltas", deltas_.is_null() ? json::object() : deltas_}};
    s["warnings"] = warnings_;
    json files = json::array();
    for (const auto& f : files_) files.push_back(std::filesystem::path(f).filename().string());
    s["files"] = files;
    emit("summary.json", s.dump(2) + "\n");
    return files_;
  }

  const RunConfig& config() const { return config_; }

 private:
  const RunConfig& config_;
  std::string outdir_;
  json results_;
  json deltas_;
  std::vector<Check> checks_;
  std::vector<std::string> warnings_;
  std::vector<std::string> files_;
};

void run_kernel(Session& s) {
  const ModelParams& m = s.config().model;
  const KernelMatrix k = build_full_kernel(m);
  const KernelMatrix k2 = build_full_kernel(m.with_grid_scale(2));
  s.emit("kernel.csv", kernel_to_csv(k));
  s.emit("kernel.json", kernel_metadata_json(k));
  const ModeDecomposition d = decompose(k);
  const double eff = efficiency_flat(k);
  s.results() = {{"efficiency_flat", eff},
                 {"max_singular_value", d.amplitudes.cwiseAbs().maxCoeff()},
                 {"z_error_estimate", k.z_error_estimate},
                 {"decomposition", to_string(d.method)}};
  s.deltas() = {{"kernel_frobenius", kernel_delta(k, k2)}, {"efficiency_flat", relative_delta(efficiency_flat(k2), eff)}};
}

json lambda_table(const ModeDecomposition& d, int count) {
  json a = json::array();
  for (int i = 0; i < std::min(count, d.count()); ++i) a.push_back(d.lambdas[i]);
  return a;
}

void run_modes(Session& s) {
  const ModelParams& m = s.config().model;
  const KernelMatrix k = build_full_kernel(m);
  const ModeDecomposition d = decompose(k);
  const int shown = std::min(kModesExported, d.count());
  const Eigen::VectorXd omegas = frequency_grid(100.0 / m.write_time, kSpectrumPoints);

  CsvTable modes, lambdas, spectra;
  modes.add("t", d.grid.nodes());
  spectra.add("omega", omegas);
  std::vector<Eigen::VectorXd> spectrum(shown);
  for (int i = 0; i < shown; ++i) {
    modes.add("psi_" + std::to_string(i + 1), Eigen::VectorXd(d.modes.col(i)));
    spectrum[i] = mode_spectrum(d.modes.col(i), d.grid, omegas);
    spectra.add("mode_" + std::to_string(i + 1), spectrum[i]);
  }
  std::vector<double> index(d.count());
  for (int i = 0; i < d.count(); ++i) index[i] = i + 1;
  lambdas.add("index", index);
  lambdas.add("lambda", d.lambdas);
  lambdas.add("amplitude", d.amplitudes);
  s.emit("modes.csv", to_csv(modes));
  s.emit("lambdas.csv", to_csv(lambdas));
  s.emit("spectra.csv", to_csv(spectra));

  json r = {{"decomposition", to_string(d.method)}, {"lambdas", lambda_table(d, shown)}};
  if (d.count() >= 3 && d.lambdas[0] > 0.0) r["lambda3_over_lambda1"] = d.lambdas[2] / d.lambdas[0];
  const double half = d.grid.start + d.grid.length() / 2.0;
  r["mode1_fraction_first_half"] = localization_fraction(d.modes.col(0), d.grid, d.grid.start, half);
  if (d.count() >= 2) r["mode2_fraction_second_half"] = localization_fraction(d.modes.col(1), d.grid, half, d.grid.stop);
  std::optional<double> fwhm;
  try {
    fwhm = spectral_fwhm(spectrum[0], omegas);
    r["mode1_fwhm"] = *fwhm;
  } catch (const RangeError& e) {
    r["mode1_fwhm"] = nullptr;
    s.warn(std::string("mode 1 FWHM unavailable: ") + e.what());
  }
  s.results() = r;

  const KernelMatrix k2 = build_full_kernel(m.with_grid_scale(2));
  const ModeDecomposition d2 = decompose(k2);
  json lam = json::array();
  for (int i = 0; i < shown; ++i)
    if (d.lambdas[i] >= 1e-2) lam.push_back(relative_delta(d2.lambdas[i], d.lambdas[i]));
  s.deltas() = {{"kernel_frobenius", kernel_delta(k, k2)}, {"significant_lambdas", lam}};
  if (fwhm) {
    try {
      s.deltas()["mode1_fwhm"] = relative_delta(spectral_fwhm(mode_spectrum(d2.modes.col(0), d2.grid, omegas), omegas), *fwhm);
    } catch (const RangeError&) {
      s.deltas()["mode1_fwhm"] = nullptr;
    }
  }
}

void run_curve(Session& s) {
  const RunConfig& c = s.config();
  const std::vector<double> points = sweep_points(c.sweep->start, c.sweep->stop, c.sweep->count);
  const EfficiencyCurve curve = efficiency_curve(c.model, points, *c.source);
  CsvTable t;
  t.add("T_R", curve.read_time);
  t.add("efficiency", curve.efficiency);
  t.add("one_minus_S_out", curve.one_minus_S_out);
  s.emit("curve.csv", to_csv(t));

  std::size_t peak = 0;
  for (std::size_t i = 1; i < curve.read_time.size(); ++i)
    if (curve.one_minus_S_out[i] > curve.one_minus_S_out[peak]) peak = i;
  double max_drop = 0.0;
  for (std::size_t i = 1; i < curve.efficiency.size(); ++i)
    max_drop = std::max(max_drop, curve.efficiency[i - 1] - curve.efficiency[i]);
  json window = nullptr;
  for (std::size_t i = 0; i < curve.read_time.size(); ++i) {
    if (curve.one_minus_S_out[i] > curve.efficiency[i]) {
      if (window.is_null()) window = {{"first_T_R", curve.read_time[i]}, {"last_T_R", curve.read_time[i]}};
      window["last_T_R"] = curve.read_time[i];
    }
  }
  const std::size_t last = curve.read_time.size() - 1;
  s.results() = {{"final_T_R", curve.read_time[last]},
                 {"final_efficiency", curve.efficiency[last]},
                 {"peak_one_minus_S_out", curve.one_minus_S_out[peak]},
                 {"peak_T_R", curve.read_time[peak]},
                 {"largest_efficiency_decrease", max_drop},
                 {"squeezing_exceeds_efficiency", window}};
  for (auto w : c.source->warnings(c.model.write_time)) s.warn(w);

  const ModelParams fine = c.model.with_grid_scale(2);
  const std::vector<double> probe = {curve.read_time[peak], curve.read_time[last]};
  const EfficiencyCurve again = efficiency_curve(fine, probe, *c.source);
  s.deltas() = {{"peak_one_minus_S_out", relative_delta(again.one_minus_S_out[0], curve.one_minus_S_out[peak])},
                {"final_efficiency", relative_delta(again.efficiency[1], curve.efficiency[last])}};
}

void run_spectra(Session& s) {
  const RunConfig& c = s.config();
  const SourceParams& src = *c.source;
  const KernelMatrix k = build_full_kernel(c.model);
  const double wmax = 4.0 * src.kappa;
  const Eigen::VectorXd omegas = frequency_grid(wmax, kSourceSpectrumPoints);
  const SqueezingSpectrum in = input_squeezing_spectrum(src, c.model.write_time, omegas);
  const CorrelatorMatrix corr = extracavity_correlator_matrix(src, k.tp_grid);
  Eigen::VectorXd out(omegas.size());
  for (Eigen::Index i = 0; i < omegas.size(); ++i)
    out[i] = 1.0 + 4.0 * output_correlator(k, corr, omegas[i], -omegas[i]).real();
  CsvTable ti, to;
  ti.add("omega", omegas);
  ti.add("S", in.S);
  to.add("omega", omegas);
  to.add("S", out);
  s.emit("input_spectrum.csv", to_csv(ti));
  s.emit("output_spectrum.csv", to_csv(to));

  const PulseSqueezing ps = pulse_squeezing(k, src);
  json r = {{"quadrature", to_string(in.quadrature)},
            {"S_in_0", ps.S_in},
            {"S_out_0", ps.S_out},
            {"stationary_S_0", stationary_squeezing(src, 0.0)},
            {"efficiency_flat", efficiency_flat(k)}};
  if (src.kind == SourceKind::laser) {
    const LaserYConsistency y = laser_y_consistency(src);
    r["laser_y_correlator"] = {{"printed_amplitude", y.printed_amplitude},
                               {"inverse_transform_amplitude", y.transform_amplitude},
                               {"ratio", y.ratio}};
    if (std::abs(y.ratio - 1.0) > 1e-6)
      s.warn("laser y time correlator as published differs from the inverse transform of its spectrum by a factor " +
             format_number(y.ratio));
  }
  s.results() = r;
  for (auto w : in.warnings) s.warn(w);
  const KernelMatrix k2 = build_full_kernel(c.model.with_grid_scale(2));
  s.deltas() = {{"S_out_0", relative_delta(pulse_squeezing(k2, src).S_out, ps.S_out)},
                {"kernel_frobenius", kernel_delta(k, k2)}};
}

void run_checks(Session& s) {
  const RunConfig& c = s.config();
  const ModelParams& m = c.model;
  auto& out = s.checks();
  const KernelMatrix k = build_full_kernel(m);
  out.push_back({"kernel_finite", k.values.allFinite() ? 1.0 : 0.0, 1.0, false});
  out.push_back({"z_quadrature_error", k.z_error_estimate, kZQuadratureTolerance, true});
  const ModeDecomposition d = decompose(k);
  out.push_back({"max_lambda", d.lambdas.maxCoeff(), 1.0 + 1e-6, true});
  out.push_back({"min_lambda", d.lambdas.minCoeff(), 0.0, false});
  out.push_back({"commutator_min_eigenvalue", commutator_deficit(k).min_eigenvalue, -1e-6, false});

  const double eff = efficiency_flat(k);
  if (k.is_square()) {
    const double norm = k.values.norm();
    out.push_back({"symmetry", norm > 0 ? (k.values - k.values.transpose()).norm() / norm : 0.0, kSymmetryTolerance, true});
    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(k.tp_grid.size(), 1.0 / std::sqrt(k.tp_grid.length()));
    double parseval = 0.0;
    for (int i = 0; i < d.count(); ++i) {
      const double overlap = d.weights.dot(d.modes.col(i).cwiseProduct(flat));
      parseval += d.lambdas[i] * overlap * overlap;
    }
    out.push_back({"parseval", std::abs(parseval - eff), 1e-6, true});
    const double S_in = c.source ? input_squeezing(*c.source, m.write_time, 0.0) : 0.5;
    double transfer = 0.0, beamsplitter = 0.0;
    for (int i = 0; i < std::min(5, d.count()); ++i) {
      const Eigen::VectorXd psi = d.modes.col(i);
      transfer = std::max(transfer, std::abs(efficiency_profile(k, psi) - d.lambdas[i]));
      const PulseSqueezing ps = transferred_squeezing(k, mode_correlator(psi, k.tp_grid, S_in), S_in, psi);
      beamsplitter = std::max(beamsplitter, std::abs(ps.S_out - beamsplitter_check(d, i, S_in)));
    }
    out.push_back({"eigenmode_transfer", transfer, 1e-6, true});
    out.push_back({"beamsplitter_pipeline", beamsplitter, 1e-3, true});
  }
  out.push_back({"efficiency_bound", eff, 1.0 + 1e-6, true});

  const InputProfile rect = [](double) { return 1.0; };
  const Eigen::VectorXd predicted = k.apply(rect);
  const DirectIntegration direct = direct_integrate(rect, m, 2);
  const Eigen::VectorXd diff = direct.output.values - predicted;
  const double pn = std::sqrt(k.w_t.dot(predicted.cwiseAbs2()));
  out.push_back({"direct_integration_l2", pn > 0 ? std::sqrt(k.w_t.dot(diff.cwiseAbs2())) / pn : 0.0, 1e-2, true});

  const KernelMatrix k2 = build_full_kernel(m.with_grid_scale(2));
  const double kd = kernel_delta(k, k2);
  out.push_back({"grid_convergence", kd, 1e-4, true});

  if (c.source) {
    const PulseSqueezing ps = pulse_squeezing(k, *c.source);
    out.push_back({"one_minus_S_out_bound", 1.0 - ps.S_out, 1.0, true});
    const CorrelatorMatrix corr = extracavity_correlator_matrix(*c.source, k.tp_grid);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k.tp_grid.size());
    const double trace_form = -4.0 / m.write_time * corr.bilinear(ones, ones);
    out.push_back({"source_window_consistency",
                   std::abs(trace_form - (1.0 - input_squeezing(*c.source, m.write_time, 0.0))), 1e-4, true});
    s.results()["S_out_0"] = ps.S_out;
  }
  s.results()["efficiency_flat"] = eff;
  s.deltas() = {{"kernel_frobenius", kd}, {"efficiency_flat", relative_delta(efficiency_flat(k2), eff)}};

  std::string csv = "check,value,threshold,comparison,passed\n";
  for (const auto& ch : out)
    csv += ch.name + "," + format_number(ch.value) + "," + format_number(ch.threshold) + "," + (ch.upper ? "<=" : ">=") +
           "," + (ch.passed() ? "1" : "0") + "\n";
  s.emit("checks.csv", csv);
}

}  // namespace

RunOutcome run(const RunConfig& input, const RunOptions& options, std::ostream& diag) {
  RunOutcome outcome;
  try {
    RunConfig config = input;
    if (options.grid_scale != 1) config.model = config.model.with_grid_scale(options.grid_scale);
    if (options.outdir) config.outdir = *options.outdir;
    config.model.validate();
    if (config.source) config.source->validate();
    std::error_code ec;
    std::filesystem::create_directories(config.outdir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + config.outdir + "': " + ec.message());

    Session s(config, config.outdir);
    switch (config.experiment) {
      case Experiment::kernel: run_kernel(s); break;
      case Experiment::modes: run_modes(s); break;
      case Experiment::efficiency_curve: run_curve(s); break;
      case Experiment::squeezing_spectra: run_spectra(s); break;
      case Experiment::checks: run_checks(s); break;
    }
    outcome.files = s.finish();
    if (!s.all_passed()) {
      for (const auto& c : s.checks())
        if (!c.passed())
          diag << "check failed: " << c.name << " = " << format_number(c.value) << " (threshold "
               << format_number(c.threshold) << ")\n";
      outcome.exit_code = kExitNumerical;
    }
  } catch (const NumericalConsistencyError& e) {
    diag << "numerical error: " << e.what() << "\n";
    outcome.exit_code = kExitNumerical;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    outcome.exit_code = kExitUsage;
  }
  return outcome;
}

}  // namespace qmem
