#include "qmem/metrics.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qmem/errors.hpp"

namespace qmem {

namespace {

// int dt' h(t') G(t_i, t') on the output grid
Eigen::VectorXd apply_plain(const KernelMatrix& k, const Eigen::VectorXd& h) {
  if (h.size() != k.tp_grid.size()) throw UsageError("profile length does not match the kernel input grid");
  return k.values * k.w_tp.cwiseProduct(h);
}

double norm2_t(const KernelMatrix& k, const Eigen::VectorXd& f) { return k.w_t.dot(f.cwiseAbs2()); }

Eigen::VectorXd reversed(const Eigen::VectorXd& v) { return v.reverse(); }

}  // namespace

double efficiency_flat(const KernelMatrix& kernel) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(kernel.tp_grid.size());
  return norm2_t(kernel, apply_plain(kernel, ones)) / kernel.tp_grid.length();
}

double efficiency_profile(const KernelMatrix& kernel, const Eigen::VectorXd& h1) {
  if (h1.size() != kernel.tp_grid.size()) throw UsageError("profile length does not match the kernel input grid");
  const double n = kernel.w_tp.dot(h1.cwiseAbs2());
  if (std::abs(n - 1.0) > kNormalizationTolerance) throw UsageError("profile is not normalized: int h1^2 = " + std::to_string(n));
  return norm2_t(kernel, apply_plain(kernel, h1));
}

double squeezing_efficiency(const KernelMatrix& kernel, const Eigen::VectorXd& h1) {
  if (h1.size() != kernel.tp_grid.size()) throw UsageError("profile length does not match the kernel input grid");
  const double mean = kernel.w_tp.dot(h1);
  if (mean == 0.0 || std::abs(mean) < 1e-14 * std::sqrt(kernel.w_tp.dot(h1.cwiseAbs2()) * kernel.tp_grid.length()))
    throw DomainError("profile has zero mean");
  const double total = kernel.w_t.dot(apply_plain(kernel, h1));
  const double r = total / mean;
  return r * r;
}

Eigen::VectorXcd windowed_kernel(const KernelMatrix& kernel, double omega) {
  Eigen::VectorXcd phase(kernel.t_grid.size());
  for (int i = 0; i < kernel.t_grid.size(); ++i) phase[i] = kernel.w_t[i] * std::polar(1.0, omega * kernel.t_grid[i]);
  return kernel.values.cast<std::complex<double>>().transpose() * phase / std::sqrt(kernel.t_grid.length());
}

namespace {

void require_grid(const KernelMatrix& kernel, const CorrelatorMatrix& input) {
  if (!(input.grid == kernel.tp_grid)) throw UsageError("input correlator grid does not match the kernel input grid");
}

}  // namespace

std::complex<double> output_correlator(const KernelMatrix& kernel, const CorrelatorMatrix& input, double omega,
                                       double omega_prime) {
  require_grid(kernel, input);
  // the correlator is indexed by input time u = T_W - t', so both projections are reversed
  const Eigen::VectorXcd f = windowed_kernel(kernel, omega).reverse();
  const Eigen::VectorXcd g = windowed_kernel(kernel, omega_prime).reverse();
  return input.bilinear(f, g);
}

double projected_output_correlator(const KernelMatrix& kernel, const CorrelatorMatrix& input,
                                   const Eigen::VectorXd& detection) {
  require_grid(kernel, input);
  if (detection.size() != kernel.t_grid.size()) throw UsageError("detection profile does not match the kernel output grid");
  const Eigen::VectorXd g = reversed(kernel.values.transpose() * kernel.w_t.cwiseProduct(detection));
  return input.bilinear(g, g);
}

PulseSqueezing pulse_squeezing(const KernelMatrix& kernel, const SourceParams& source) {
  source.validate();
  PulseSqueezing r;
  r.S_in = input_squeezing(source, kernel.tp_grid.length(), 0.0);
  r.N_in = (r.S_in - 1.0) / 4.0;
  if (r.N_in == 0.0) throw DegenerateSourceError("source has no normally ordered noise at zero frequency");
  const CorrelatorMatrix input = extracavity_correlator_matrix(source, kernel.tp_grid);
  r.N_out = output_correlator(kernel, input, 0.0, 0.0).real();
  r.S_out = 1.0 - (1.0 - r.S_in) * r.N_out / r.N_in;
  return r;
}

PulseSqueezing transferred_squeezing(const KernelMatrix& kernel, const CorrelatorMatrix& input, double S_in,
                                     const Eigen::VectorXd& detection) {
  PulseSqueezing r;
  r.S_in = S_in;
  r.N_in = (S_in - 1.0) / 4.0;
  if (r.N_in == 0.0) throw DegenerateSourceError("input carries no normally ordered noise");
  r.N_out = projected_output_correlator(kernel, input, detection);
  r.S_out = 1.0 - (1.0 - r.S_in) * r.N_out / r.N_in;
  return r;
}

CorrelatorMatrix mode_correlator(const Eigen::VectorXd& psi, const UniformGrid& grid, double S_in) {
  if (psi.size() != grid.size()) throw UsageError("mode length does not match grid");
  // stored against input time u = T_W - t'
  const Eigen::VectorXd u = psi.reverse();
  return CorrelatorMatrix::from_samples((S_in - 1.0) / 4.0 * u * u.transpose(), grid, Quadrature::x);
}

double beamsplitter_check(const ModeDecomposition& d, int mode_index, double S_in) {
  if (d.method != DecompositionMethod::symmetric_eigen)
    throw UsageError("beamsplitter relation requires equal write and read times");
  if (mode_index < 0 || mode_index >= d.count()) throw UsageError("mode index out of range");
  return 1.0 - d.lambdas[mode_index] * (1.0 - S_in);
}

CommutatorDeficit commutator_deficit(const KernelMatrix& kernel) {
  const Eigen::MatrixXd M = kernel.w_t.cwiseSqrt().asDiagonal() * kernel.values * kernel.w_tp.cwiseSqrt().asDiagonal();
  CommutatorDeficit c;
  c.matrix = Eigen::MatrixXd::Identity(M.rows(), M.rows()) - M * M.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c.matrix + c.matrix.transpose()), Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

std::vector<double> sweep_points(double start, double stop, int count) {
  if (count < 1) throw UsageError("sweep count must be >= 1");
  if (!(start > 0.0) || stop < start) throw UsageError("sweep needs 0 < start <= stop");
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = count == 1 ? start : start + (stop - start) * k / (count - 1);
  return out;
}

EfficiencyCurve efficiency_curve(const ModelParams& params, std::span<const double> read_times,
                                 const SourceParams& source) {
  EfficiencyCurve c;
  for (double t_r : read_times) {
    const KernelMatrix k = build_full_kernel(params.with_read_time(t_r));
    c.read_time.push_back(t_r);
    c.efficiency.push_back(efficiency_flat(k));
    c.one_minus_S_out.push_back(1.0 - pulse_squeezing(k, source).S_out);
  }
  return c;
}

}  // namespace qmem
