#pragma once

// Eigenmodes of the full kernel: the Fredholm problem
//   int G(t, t') psi(t') dt' = sqrt(lambda) psi(t)
// discretized with quadrature weights and solved as a symmetric matrix
// problem (square case) or through a singular value decomposition.

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qmem/memory_map.hpp"
#include "qmem/quadrature.hpp"

namespace qmem {

enum class DecompositionMethod { symmetric_eigen, svd };

std::string_view to_string(DecompositionMethod m);

inline constexpr double kSymmetryTolerance = 1e-8;

struct ModeDecomposition {
  Eigen::VectorXd lambdas;      // descending transfer eigenvalues
  Eigen::VectorXd amplitudes;   // signed kernel eigenvalues (singular values for svd)
  Eigen::MatrixXd modes;        // column i: psi_i on the input grid
  Eigen::MatrixXd output_modes; // column i: retrieved profile on the output grid
  UniformGrid grid;             // input grid
  UniformGrid output_grid;
  Eigen::VectorXd weights;      // input-grid quadrature weights
  DecompositionMethod method = DecompositionMethod::symmetric_eigen;

  int count() const { return static_cast<int>(lambdas.size()); }
  Eigen::VectorXd mode(int i) const { return modes.col(i); }
};

/// Throws NumericalConsistencyError if a square kernel is not symmetric to
/// kSymmetryTolerance (relative Frobenius).
ModeDecomposition decompose(const KernelMatrix& kernel);

/// |(1/sqrt(T)) int_0^T psi(t) e^{i w t} dt| on each frequency.
Eigen::VectorXd mode_spectrum(const Eigen::VectorXd& mode, const UniformGrid& grid, const Eigen::VectorXd& omegas);

/// Symmetric frequency grid [-omega_max, omega_max] with `points` nodes.
Eigen::VectorXd frequency_grid(double omega_max, int points);

/// Share of int psi^2 falling inside [t1, t2].
double localization_fraction(const Eigen::VectorXd& mode, const UniformGrid& grid, double t1, double t2);

/// Full width at half maximum around the global maximum, interpolating
/// linearly between samples. Throws RangeError if either half-maximum
/// crossing lies outside the grid.
double spectral_fwhm(const Eigen::VectorXd& spectrum, const Eigen::VectorXd& omegas);

}  // namespace qmem
