#pragma once

// Bessel functions needed by the memory kernels. Only real, non-negative
// arguments are supported. The modified functions come exponentially scaled
// (e^{-x} I_n(x)) because the adiabatic kernels pair I_n(2 sqrt(tz)) with
// e^{-t-z}, and the unscaled values overflow at the optical depths in use.
//
// All functions throw DomainError for negative or non-finite input.

namespace qmem::specfun {

/// Arguments below this use the power series, at or above it the Hankel expansion.
inline constexpr double kJCrossover = 20.0;
inline constexpr double kICrossover = 30.0;

double bessel_j0(double x);
double bessel_j1(double x);
/// J1(x)/x, finite at 0 where it equals 1/2.
double bessel_j1_over_x(double x);

/// e^{-x} I0(x), in (0, 1].
double bessel_i0e(double x);
/// e^{-x} I1(x), in [0, 1).
double bessel_i1e(double x);
/// e^{-x} I1(x) / x, equal to 1/2 at 0.
double bessel_i1e_over_x(double x);

namespace detail {
// Single-branch evaluations, exposed so tests can check the branches agree
// across the crossover.
double j_series(int order, double x);
double j_asymptotic(int order, double x);
double ie_series(int order, double x);
double ie_asymptotic(int order, double x);
}  // namespace detail

}  // namespace qmem::specfun
