#pragma once

// Discretized write->read kernel G(t, t') of a full storage cycle, for either
// regime and either retrieval direction, plus the intermediate fields of the
// writing stage and an independent direct integrator of the propagation
// equations.
//
// The kernel consumes the input in reversed time:
//   a_out(t) = int_0^{T_W} a_in(T_W - t') G(t, t') dt'.
// The matrix stores G(t_i, t'_j) itself; the reversal happens in apply().

#include <functional>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "qmem/green_kernels.hpp"
#include "qmem/quadrature.hpp"

namespace qmem {

enum class Direction { forward, backward };

std::string_view to_string(Regime r);
std::string_view to_string(Direction d);

struct ModelParams {
  Regime regime = Regime::high_speed;
  double length = 10.0;      // L
  double write_time = 5.5;   // T_W
  double read_time = 5.5;    // T_R
  Direction direction = Direction::backward;
  // Simpson interval counts; each grid has count + 1 nodes.
  int n_t = 256;
  int n_tp = 256;
  int n_z = 256;

  /// Throws UsageError on non-positive lengths/times or grid counts that are
  /// odd or below 16.
  void validate() const;

  ModelParams with_grid_scale(int k) const;
  ModelParams with_read_time(double t_r) const;

  UniformGrid t_grid() const { return {0.0, read_time, n_t}; }
  UniformGrid tp_grid() const { return {0.0, write_time, n_tp}; }
  UniformGrid z_grid() const { return {0.0, length, n_z}; }
};

using InputProfile = std::function<double(double)>;

struct KernelMatrix {
  Eigen::MatrixXd values;  // (n_t + 1) x (n_tp + 1), entry (i, j) = G(t_i, t'_j)
  UniformGrid t_grid;
  UniformGrid tp_grid;
  Eigen::VectorXd w_t;
  Eigen::VectorXd w_tp;
  std::optional<ModelParams> params;
  /// Richardson estimate of the relative Frobenius error of the z quadrature.
  double z_error_estimate = 0.0;

  /// Wrap an arbitrary matrix sampled on the given grids (Simpson weights).
  static KernelMatrix from_values(Eigen::MatrixXd values, const UniformGrid& t_grid, const UniformGrid& tp_grid);

  /// Read time equals write time and both grids coincide.
  bool is_square() const;

  /// Output on t_grid for an input profile a_in on [0, T_W].
  Eigen::VectorXd apply(const InputProfile& input) const;
  /// Output on t_grid for input samples already reversed: reversed[j] = a_in(T_W - t'_j).
  Eigen::VectorXd apply_reversed(const Eigen::VectorXd& reversed) const;
};

inline constexpr double kZQuadratureTolerance = 1e-5;

/// Throws AccuracyError if the z-quadrature doubling estimate exceeds
/// kZQuadratureTolerance.
KernelMatrix build_full_kernel(const ModelParams& params);

struct SpatialProfile {
  UniformGrid z_grid;
  Eigen::VectorXd values;
};

struct TemporalProfile {
  UniformGrid t_grid;
  Eigen::VectorXd values;
};

/// Atomic coherence b(z, T_W) left by the writing stage on the z grid.
/// `coupling_ratio` is p = Omega / (g sqrt(N)); the stored profile scales as 1/p.
SpatialProfile write_coherence_profile(const InputProfile& input, const ModelParams& params,
                                       double coupling_ratio = 1.0);

/// Signal leaving the medium at z = L during writing, on the write grid.
TemporalProfile leakage_field(const InputProfile& input, const ModelParams& params);

struct DirectIntegration {
  TemporalProfile output;            // a(L, t) during read-out, on params.t_grid()
  TemporalProfile leakage;           // a(L, t) during writing, on params.tp_grid()
  SpatialProfile stored_coherence;   // p * b(z, T_W), on the refined z grid
  int refinement = 1;
};

inline constexpr double kIntegrationBlowup = 1e3;

/// Integrates the propagation equations through writing and read-out with a
/// second-order box scheme on grids `refinement` times finer than params.
/// Throws IntegrationError if any field exceeds kIntegrationBlowup times the
/// input peak.
DirectIntegration direct_integrate(const InputProfile& input, const ModelParams& params, int refinement = 1);

}  // namespace qmem
