#include "qmem/green_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "qmem/errors.hpp"
#include "qmem/specfun.hpp"

namespace qmem::green {

namespace {

using cplx = std::complex<double>;

void check_point(double z, double t, const char* fn) {
  if (!std::isfinite(z) || !std::isfinite(t)) throw DomainError(std::string(fn) + ": non-finite argument");
  if (z < 0.0 || t < 0.0) throw DomainError(std::string(fn) + ": negative argument");
}

void check_intervals(int intervals) {
  if (intervals < 2 || intervals % 2 != 0)
    throw UsageError("convolution quadrature needs an even interval count >= 2");
}

thread_local double t_max_residue = 0.0;

double checked_real(cplx value, const char* fn) {
  const double residue = std::fabs(value.imag()) / (1.0 + std::fabs(value.real()));
  t_max_residue = std::max(t_max_residue, residue);
  if (residue > kRealnessTolerance)
    throw NumericalConsistencyError(std::string(fn) + ": imaginary residue " + std::to_string(residue) +
                                    " exceeds tolerance");
  return value.real();
}

// int_0^t f(t - tau) h(tau) dtau, composite Simpson.
cplx convolve(const std::function<cplx(double)>& f, const std::function<cplx(double)>& h, double t,
              int intervals) {
  if (t == 0.0) return {0.0, 0.0};
  const double step = t / intervals;
  cplx sum{0.0, 0.0};
  for (int k = 0; k <= intervals; ++k) {
    const double tau = (k == intervals) ? t : k * step;
    const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * f(t - tau) * h(tau);
  }
  return sum * (step / 3.0);
}

cplx phase(double t) { return std::polar(1.0, -t); }

// e^{-it} sqrt(z/(4t)) J1(sqrt(tz)), the smooth part of g_aa with its sign removed.
cplx hs_aa_tail(double z, double t) { return phase(t) * (0.5 * z * specfun::bessel_j1_over_x(std::sqrt(t * z))); }

// Smooth part of G_ac: Re(g_aa * conj(g_ab)) without delta(z) terms.
double hs_ac_smooth(double z, double t, int intervals) {
  const auto tail = [z](double s) { return hs_aa_tail(z, s); };
  const auto gab_conj = [z](double s) { return std::conj(hs_g_ab(z, s)); };
  const cplx conv = convolve(tail, gab_conj, t, intervals);
  return std::cos(t) * specfun::bessel_j0(std::sqrt(t * z)) - conv.real();
}

}  // namespace

// --- scaling -----------------------------------------------------------------

DimensionlessScaling DimensionlessScaling::adiabatic(double rabi, double gamma, double coupling_gN) {
  if (!(rabi > 0 && gamma > 0 && coupling_gN > 0)) throw UsageError("scaling: rates must be positive");
  if (gamma < kRegimeMargin * rabi) throw UsageError("adiabatic regime requires gamma >> Omega");
  DimensionlessScaling s;
  s.regime = Regime::adiabatic;
  s.rabi = rabi;
  s.gamma = gamma;
  s.coupling_gN = coupling_gN;
  s.C1 = 2.0 * coupling_gN * coupling_gN / gamma;
  s.C2 = 2.0 * rabi * rabi / gamma;
  s.coupling_ratio_p = rabi / coupling_gN;
  return s;
}

DimensionlessScaling DimensionlessScaling::high_speed(double rabi, double gamma, double coupling_gN) {
  if (!(rabi > 0 && gamma >= 0 && coupling_gN > 0)) throw UsageError("scaling: rates must be positive");
  if (rabi < kRegimeMargin * gamma) throw UsageError("high-speed regime requires Omega >> gamma");
  DimensionlessScaling s;
  s.regime = Regime::high_speed;
  s.rabi = rabi;
  s.gamma = gamma;
  s.coupling_gN = coupling_gN;
  s.coupling_ratio_p = rabi / coupling_gN;
  return s;
}

double DimensionlessScaling::length_scale() const {
  return regime == Regime::adiabatic ? C1 : 2.0 * coupling_gN * coupling_gN / rabi;
}

double DimensionlessScaling::time_scale() const { return regime == Regime::adiabatic ? C2 : rabi; }

// --- adiabatic -----------------------------------------------------------------

double ad_G_ba(double z, double t) {
  check_point(z, t, "ad_G_ba");
  const double d = std::sqrt(t) - std::sqrt(z);
  return std::exp(-d * d) * specfun::bessel_i0e(2.0 * std::sqrt(t * z));
}

KernelPoint ad_G_aa(double z, double t) {
  check_point(z, t, "ad_G_aa");
  const double d = std::sqrt(t) - std::sqrt(z);
  // sqrt(z/t) I1(u) = 2z I1(u)/u with u = 2 sqrt(tz)
  const double smooth = std::exp(-d * d) * 2.0 * z * specfun::bessel_i1e_over_x(2.0 * std::sqrt(t * z));
  return {smooth, std::exp(-z)};
}

KernelPoint ad_G_bb(double z, double t) {
  check_point(z, t, "ad_G_bb");
  const double d = std::sqrt(t) - std::sqrt(z);
  const double smooth = std::exp(-d * d) * 2.0 * t * specfun::bessel_i1e_over_x(2.0 * std::sqrt(t * z));
  return {smooth, std::exp(-t)};
}

// --- high-speed elementary -------------------------------------------------------

cplx hs_g_ab(double z, double t) {
  check_point(z, t, "hs_g_ab");
  return phase(t) * specfun::bessel_j0(std::sqrt(t * z));
}

ComplexKernelPoint hs_g_aa(double z, double t) {
  check_point(z, t, "hs_g_aa");
  return {-hs_aa_tail(z, t), 1.0};
}

cplx hs_g_bb(double z, double t) {
  check_point(z, t, "hs_g_bb");
  // sqrt(4t/z) J1(sqrt(tz)) = 2t J1(x)/x
  return phase(t) * (2.0 * t * specfun::bessel_j1_over_x(std::sqrt(t * z)));
}

// --- high-speed bilinear ----------------------------------------------------------

double hs_G_ab(double z, double t, int intervals) {
  check_point(z, t, "hs_G_ab");
  check_intervals(intervals);
  const auto g = [z](double s) { return hs_g_ab(z, s); };
  const auto gc = [z](double s) { return std::conj(hs_g_ab(z, s)); };
  return checked_real(convolve(g, gc, t, intervals), "hs_G_ab");
}

KernelPoint hs_G_aa(double z, double t, int intervals) {
  check_point(z, t, "hs_G_aa");
  check_intervals(intervals);
  // (delta - s) * (delta - s)^* = delta - s - s^* + s * s^*
  const auto s = [z](double u) { return hs_aa_tail(z, u); };
  const auto sc = [z](double u) { return std::conj(hs_aa_tail(z, u)); };
  const double conv = checked_real(convolve(s, sc, t, intervals), "hs_G_aa");
  const double smooth = -2.0 * hs_aa_tail(z, t).real() + conv;
  return {smooth, 1.0};
}

KernelPoint hs_G_bb(double z, double t, int intervals) {
  check_point(z, t, "hs_G_bb");
  check_intervals(intervals);
  const auto g = [z](double u) { return hs_g_bb(z, u); };
  const auto gc = [z](double u) { return std::conj(hs_g_bb(z, u)); };
  return {checked_real(convolve(g, gc, t, intervals), "hs_G_bb"), 2.0 * std::cos(t)};
}

KernelPoint hs_G_ac(double z, double t, int intervals) {
  check_point(z, t, "hs_G_ac");
  check_intervals(intervals);
  return {hs_ac_smooth(z, t, intervals), 0.0};
}

KernelPoint hs_G_bc(double z, double t, int intervals) {
  check_point(z, t, "hs_G_bc");
  check_intervals(intervals);
  return {-hs_ac_smooth(z, t, intervals), std::sin(t)};
}

double max_realness_residue() { return t_max_residue; }
void reset_realness_residue() { t_max_residue = 0.0; }

}  // namespace qmem::green
