#pragma once

// Figures of merit of a storage cycle: quantum efficiency, transfer of
// quadrature squeezing, the beamsplitter picture for eigenmode inputs and the
// commutator diagnostic of the vacuum channel.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qmem/light_sources.hpp"
#include "qmem/memory_map.hpp"
#include "qmem/modes.hpp"

namespace qmem {

inline constexpr double kNormalizationTolerance = 1e-6;

/// (1/T_W) int dt (int dt' G(t, t'))^2
double efficiency_flat(const KernelMatrix& kernel);

/// int dt (int dt' h1(t') G(t, t'))^2 for h1 sampled on the input grid with
/// int h1^2 = 1. Throws UsageError otherwise.
double efficiency_profile(const KernelMatrix& kernel, const Eigen::VectorXd& h1);

/// [int dt int dt' h1(t') G(t, t') / int h1]^2. Throws DomainError if int h1 = 0.
double squeezing_efficiency(const KernelMatrix& kernel, const Eigen::VectorXd& h1);

/// G(w, t') = (1/sqrt(T_R)) int G(t, t') e^{i w t} dt on the input grid.
Eigen::VectorXcd windowed_kernel(const KernelMatrix& kernel, double omega);

/// int int C(T_W - t1, T_W - t2) G(w, t1) G(w', t2) dt1 dt2.
/// Throws UsageError if the correlator grid differs from the kernel input grid.
std::complex<double> output_correlator(const KernelMatrix& kernel, const CorrelatorMatrix& input, double omega,
                                       double omega_prime);

/// Same double integral with G(w, t') replaced by int h(t) G(t, t') dt for an
/// arbitrary detection profile h on the output grid.
double projected_output_correlator(const KernelMatrix& kernel, const CorrelatorMatrix& input,
                                   const Eigen::VectorXd& detection);

struct PulseSqueezing {
  double S_in = 1.0;   // input pulse squeezing at zero frequency
  double S_out = 1.0;  // retrieved pulse squeezing at zero frequency
  double N_in = 0.0;   // normally ordered input correlator at w = w' = 0
  double N_out = 0.0;  // normally ordered output correlator at w = w' = 0
};

/// Throws DegenerateSourceError if the source carries no normally ordered
/// noise (N_in = 0).
PulseSqueezing pulse_squeezing(const KernelMatrix& kernel, const SourceParams& source);

/// Pulse squeezing for an arbitrary input correlator with known input
/// squeezing S_in, detected in `detection` (unit norm on the output grid).
PulseSqueezing transferred_squeezing(const KernelMatrix& kernel, const CorrelatorMatrix& input, double S_in,
                                     const Eigen::VectorXd& detection);

/// Rank-1 correlator N psi(T_W - t1) psi(T_W - t2) carrying S_in = 1 + 4N in
/// the mode psi (sampled in kernel time, i.e. psi_k = profile(t'_k)).
CorrelatorMatrix mode_correlator(const Eigen::VectorXd& psi, const UniformGrid& grid, double S_in);

/// 1 - S_out = lambda_i (1 - S_in). Throws UsageError unless the
/// decomposition came from a square kernel.
double beamsplitter_check(const ModeDecomposition& d, int mode_index, double S_in);

struct CommutatorDeficit {
  Eigen::MatrixXd matrix;  // I - M M^T with M the weight-symmetrized kernel
  double min_eigenvalue = 1.0;
};
CommutatorDeficit commutator_deficit(const KernelMatrix& kernel);

struct EfficiencyCurve {
  std::vector<double> read_time;
  std::vector<double> efficiency;
  std::vector<double> one_minus_S_out;
};

/// Builds the kernel for every read time and evaluates efficiency_flat and
/// pulse_squeezing.
EfficiencyCurve efficiency_curve(const ModelParams& params, std::span<const double> read_times,
                                 const SourceParams& source);

/// Read times start + k (stop - start)/(count - 1).
std::vector<double> sweep_points(double start, double stop, int count);

}  // namespace qmem
