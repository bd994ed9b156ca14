#pragma once

// Squeezed-light sources: a phase-locked sub-Poissonian laser (amplitude
// squeezing, x quadrature) and a degenerate parametric oscillator below
// threshold (phase squeezing, y quadrature).
//
// Conventions: the intracavity normally ordered spectrum is
//   (:dq_w^2:) = int c(tau) e^{i w tau} dtau
// with c(tau) the stationary time correlator; the extracavity normally
// ordered correlator is kappa * c(tau). A pulse of duration T is analysed with
// F_w = (1/sqrt(T)) int_0^T F(t) e^{i w t} dt. The vacuum delta part of the
// quadrature correlator is never discretized.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qmem/quadrature.hpp"

namespace qmem {

enum class SourceKind { laser, dopo };
enum class Quadrature { x, y };

std::string_view to_string(SourceKind k);
std::string_view to_string(Quadrature q);

inline constexpr double kMuLimit = 0.2;
inline constexpr double kMuWarn = 0.1;

struct SourceParams {
  SourceKind kind = SourceKind::laser;
  double kappa = 1.0;         // cavity linewidth in the regime's time units
  double mu = 0.01;           // laser locking parameter
  double pump_order_p = 1.0;  // laser pump regularity, 0 = Poissonian
  double s = 0.5;             // DOPO threshold approach

  /// Throws UsageError when a field violates its range.
  void validate() const;
  /// Soft-limit notes (mu beyond the small-parameter regime, short pulses).
  std::vector<std::string> warnings(double pulse_duration = 0.0) const;

  Quadrature squeezed_quadrature() const { return kind == SourceKind::laser ? Quadrature::x : Quadrature::y; }
};

/// c(tau) = amplitude * exp(-rate |tau|)
struct ExponentialCorrelator {
  double amplitude = 0.0;
  double rate = 1.0;
  double operator()(double tau) const;
  /// int c(tau) e^{i w tau} dtau
  double spectrum(double omega) const;
};

/// Intracavity correlator in closed form. The laser y amplitude follows the
/// published time-domain expression (1 - mu)/mu; see laser_y_consistency().
ExponentialCorrelator correlator_shape(const SourceParams& p, Quadrature q);

/// Intracavity normally ordered spectrum (:dq_w^2:).
double stationary_spectrum(const SourceParams& p, Quadrature q, double omega);

/// Intracavity normally ordered time correlator <:dq(t) dq(t + tau):>.
double time_correlator(const SourceParams& p, Quadrature q, double tau);

/// Normally ordered correlator sampled on a grid, together with the
/// quadrature matrix Q of its bilinear form:
///   f^T Q g  ~  int int f(t1) C(t1, t2) g(t2) dt1 dt2.
struct CorrelatorMatrix {
  Eigen::MatrixXd values;
  Eigen::MatrixXd form;
  UniformGrid grid;
  Quadrature quadrature = Quadrature::x;

  /// Generic correlator: form = W C W with Simpson weights.
  static CorrelatorMatrix from_samples(Eigen::MatrixXd values, const UniformGrid& grid, Quadrature q);

  double bilinear(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const { return f.dot(form * g); }
  std::complex<double> bilinear(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) const {
    return (f.transpose() * form.cast<std::complex<double>>() * g)(0, 0);
  }
};

/// Extracavity correlator kappa * c(|t_i - t_j|) of the source's squeezed
/// quadrature. The cusp at t1 = t2 is integrated exactly against piecewise
/// linear test functions; the outer variable uses Simpson weights.
CorrelatorMatrix extracavity_correlator_matrix(const SourceParams& p, const UniformGrid& grid);

/// Same for an explicit exponential correlator (already extracavity).
CorrelatorMatrix exponential_correlator_matrix(const ExponentialCorrelator& c, const UniformGrid& grid, Quadrature q);

/// sinc((w + w') T / 2) exp(i (w + w') T / 2)
std::complex<double> windowed_delta(double omega, double omega_prime, double T);

struct SqueezingSpectrum {
  Eigen::VectorXd omega;
  Eigen::VectorXd S;
  double pulse_duration = 0.0;
  Quadrature quadrature = Quadrature::x;
  std::vector<std::string> warnings;
};

/// Squeezing degree e^{-r(w)} of a pulse of duration T in the squeezed
/// quadrature, closed form at w' = -w.
SqueezingSpectrum input_squeezing_spectrum(const SourceParams& p, double T, const Eigen::VectorXd& omegas);
double input_squeezing(const SourceParams& p, double T, double omega);

/// The stationary limit T -> infinity of input_squeezing.
double stationary_squeezing(const SourceParams& p, double omega);

/// Comparison of the published laser y amplitude against the amplitude
/// obtained by numerically inverting the stationary y spectrum at tau = 0.
struct LaserYConsistency {
  double printed_amplitude = 0.0;
  double transform_amplitude = 0.0;
  double ratio = 0.0;  // printed / transform
};
LaserYConsistency laser_y_consistency(const SourceParams& p);

/// Numerical inverse transform (1/2pi) int spectrum(w) dw at tau = 0.
double numeric_correlator_at_zero(const SourceParams& p, Quadrature q);

}  // namespace qmem
