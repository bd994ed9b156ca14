#pragma once

// Elementary Green's functions of the two memory regimes, evaluated at a point
// (z, t) of dimensionless length and time. Kernels that contain a Dirac delta
// return it symbolically in KernelPoint::delta_weight; it is never sampled.

#include <complex>
#include <span>
#include <vector>

#include "qmem/quadrature.hpp"

namespace qmem {

enum class Regime { adiabatic, high_speed };

namespace green {

struct KernelPoint {
  double smooth = 0.0;
  double delta_weight = 0.0;
};

struct ComplexKernelPoint {
  std::complex<double> smooth;
  double delta_weight = 0.0;
};

/// Conversion from physical rates to the dimensionless variables of a regime.
/// The drive phase is fixed to zero.
struct DimensionlessScaling {
  Regime regime = Regime::adiabatic;
  double rabi = 0.0;       // Omega
  double gamma = 0.0;      // excited-state decay
  double coupling_gN = 0.0;  // g sqrt(N)
  double C1 = 0.0;         // adiabatic only
  double C2 = 0.0;         // adiabatic only
  double coupling_ratio_p = 0.0;  // Omega / (g sqrt(N))

  /// gamma must exceed Omega by at least `kRegimeMargin`.
  static DimensionlessScaling adiabatic(double rabi, double gamma, double coupling_gN);
  /// Omega must exceed gamma by at least `kRegimeMargin`.
  static DimensionlessScaling high_speed(double rabi, double gamma, double coupling_gN);

  /// Multiply a physical length / time by these to get dimensionless ones.
  double length_scale() const;
  double time_scale() const;
};

inline constexpr double kRegimeMargin = 10.0;

// --- adiabatic regime -------------------------------------------------------

/// e^{-t-z} I0(2 sqrt(tz)); G_ab and G_ba coincide.
double ad_G_ba(double z, double t);
inline double ad_G_ab(double z, double t) { return ad_G_ba(z, t); }
/// delta_weight multiplies delta(t).
KernelPoint ad_G_aa(double z, double t);
/// delta_weight multiplies delta(z).
KernelPoint ad_G_bb(double z, double t);

// --- high-speed regime ------------------------------------------------------

std::complex<double> hs_g_ab(double z, double t);
/// delta_weight multiplies delta(t).
ComplexKernelPoint hs_g_aa(double z, double t);
std::complex<double> hs_g_bb(double z, double t);

inline constexpr int kDefaultConvolutionIntervals = 512;
inline constexpr double kRealnessTolerance = 1e-9;

/// Self-convolution of g_ab over [0, t] by composite Simpson with `intervals`
/// steps. Throws NumericalConsistencyError if the discarded imaginary part
/// exceeds kRealnessTolerance * (1 + |result|).
double hs_G_ab(double z, double t, int intervals = kDefaultConvolutionIntervals);
inline double hs_G_ba(double z, double t, int intervals = kDefaultConvolutionIntervals) {
  return hs_G_ab(z, t, intervals);
}
/// delta_weight multiplies delta(t) (always 1).
KernelPoint hs_G_aa(double z, double t, int intervals = kDefaultConvolutionIntervals);
/// delta_weight multiplies delta(z): 2 cos t.
KernelPoint hs_G_bb(double z, double t, int intervals = kDefaultConvolutionIntervals);
KernelPoint hs_G_ac(double z, double t, int intervals = kDefaultConvolutionIntervals);
/// delta_weight multiplies delta(z): sin t.
KernelPoint hs_G_bc(double z, double t, int intervals = kDefaultConvolutionIntervals);

/// Largest |Im| / (1 + |Re|) observed by the convolution routines on this
/// thread since the last reset.
double max_realness_residue();
void reset_realness_residue();

/// hs_G_ab tabulated on z_nodes x t_grid. The convolution for t_n uses 2n
/// Simpson steps of t_grid.step()/2, so accuracy tracks the time grid.
struct HighSpeedTable {
  int z_count = 0;
  int t_count = 0;
  std::vector<double> values;  // [z][t], row-major
  double max_imag_residue = 0.0;

  double operator()(int zi, int ti) const { return values[static_cast<std::size_t>(zi) * t_count + ti]; }
  std::span<const double> row(int zi) const {
    return {values.data() + static_cast<std::size_t>(zi) * t_count, static_cast<std::size_t>(t_count)};
  }
};

HighSpeedTable tabulate_hs_G_ab(std::span<const double> z_nodes, const UniformGrid& t_grid);

}  // namespace green
}  // namespace qmem
