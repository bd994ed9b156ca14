#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "qmem/errors.hpp"
#include "qmem/green_kernels.hpp"

using namespace qmem;
using namespace qmem::green;
using cd = std::complex<double>;

namespace {

// e^{-t-z} sum_k (tz)^k / (k!)^2, long double
double ad_ba_series(double z, double t, int terms = 80) {
  long double term = 1.0L, sum = 1.0L;
  const long double q = static_cast<long double>(t) * z;
  for (int k = 1; k < terms; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
  }
  return static_cast<double>(std::exp(-static_cast<long double>(t) - z) * sum);
}

// e^{-t-z} sqrt(z/t) I1(2 sqrt(tz)) = e^{-t-z} z sum_k (tz)^k / (k! (k+1)!)
double ad_aa_series(double z, double t, int terms = 80) {
  long double term = 1.0L, sum = 1.0L;
  const long double q = static_cast<long double>(t) * z;
  for (int k = 1; k < terms; ++k) {
    term *= q / (static_cast<long double>(k) * (k + 1));
    sum += term;
  }
  return static_cast<double>(std::exp(-static_cast<long double>(t) - z) * z * sum);
}

double J(int n, double x) { return boost::math::cyl_bessel_j(n, x); }

// high-speed elementary kernels written out directly from the Bessel library
cd s_oracle(double z, double t) {
  const double x = std::sqrt(t * z);
  const double j1x = x == 0.0 ? 0.5 : J(1, x) / x;
  return std::polar(1.0, -t) * (z / 2.0) * j1x;
}

cd gbb_oracle(double z, double t) {
  const double x = std::sqrt(t * z);
  const double j1x = x == 0.0 ? 0.5 : J(1, x) / x;
  return std::polar(1.0, -t) * 2.0 * t * j1x;
}

template <typename F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

double hs_ab_oracle(double z, double t) {
  return integrate([&](double tau) { return std::cos(t - 2 * tau) * J(0, std::sqrt((t - tau) * z)) * J(0, std::sqrt(tau * z)); }, 0.0, t);
}

double hs_aa_smooth_oracle(double z, double t) {
  const double conv = integrate([&](double tau) { return (s_oracle(z, t - tau) * std::conj(s_oracle(z, tau))).real(); }, 0.0, t);
  return -2.0 * s_oracle(z, t).real() + conv;
}

double hs_bb_smooth_oracle(double z, double t) {
  return integrate([&](double tau) { return (gbb_oracle(z, t - tau) * std::conj(gbb_oracle(z, tau))).real(); }, 0.0, t);
}

}  // namespace

TEST_CASE("adiabatic G_ba") {
  CHECK(ad_G_ba(0, 0) == 1.0);
  for (double z : {0.0, 0.3, 2.0, 17.0})
    CHECK(ad_G_ba(z, 0) == doctest::Approx(std::exp(-z)).epsilon(1e-15));
  CHECK(std::abs(ad_G_ba(5, 5) - ad_ba_series(5, 5)) / ad_ba_series(5, 5) < 1e-10);
  for (double z = 0.0; z <= 60.0; z += 2.7)
    for (double t = 0.0; t <= 60.0; t += 3.1) {
      CHECK(ad_G_ba(z, t) == ad_G_ba(t, z));
      CHECK(ad_G_ba(z, t) > 0.0);
      CHECK(ad_G_ba(z, t) <= 1.0);
      if (z * t < 400) CHECK(std::abs(ad_G_ba(z, t) - ad_ba_series(z, t, 200)) <= 1e-10 * ad_ba_series(z, t, 200) + 1e-300);
    }
  CHECK(ad_G_ab(1.5, 2.5) == ad_G_ba(1.5, 2.5));
  // at the depths in use the unscaled product would overflow
  CHECK(std::isfinite(ad_G_ba(55, 55)));
  CHECK(ad_G_ba(55, 55) > 0.0);
}

TEST_CASE("adiabatic G_aa and G_bb") {
  CHECK(ad_G_aa(2, 0.3).delta_weight == doctest::Approx(std::exp(-2.0)));
  CHECK(ad_G_bb(0.3, 2).delta_weight == doctest::Approx(std::exp(-2.0)));
  for (double z : {0.5, 1.0, 3.0}) CHECK(ad_G_aa(z, 0).smooth == doctest::Approx(z * std::exp(-z)).epsilon(1e-14));
  CHECK(ad_G_aa(3, 1e-12).smooth == doctest::Approx(3 * std::exp(-3.0)).epsilon(1e-10));
  CHECK(std::abs(ad_G_aa(3, 4).smooth - ad_aa_series(3, 4)) < 1e-10 * ad_aa_series(3, 4));
  // G_bb is G_aa with the roles of z and t exchanged
  for (double z : {0.0, 0.7, 4.0, 30.0})
    for (double t : {0.0, 1.3, 9.0, 40.0}) CHECK(ad_G_bb(z, t).smooth == doctest::Approx(ad_G_aa(t, z).smooth).epsilon(1e-13));
}

TEST_CASE("high-speed elementary kernels") {
  for (double z : {0.0, 1.0, 10.0}) CHECK(hs_g_ab(z, 0) == cd(1.0, 0.0));
  for (int i = 0; i <= 20; ++i)
    for (int k = 0; k <= 20; ++k) CHECK(std::abs(hs_g_ab(0.5 * i, 0.275 * k)) <= 1.0 + 1e-15);
  CHECK(std::abs(hs_g_ab(3, 2) - std::polar(1.0, -2.0) * J(0, std::sqrt(6.0))) < 1e-12);
  // sqrt(4t/z) J1(sqrt(tz)) at z=4, t=1 is J1(2)
  CHECK(std::abs(hs_g_bb(4, 1) - std::polar(1.0, -1.0) * J(1, 2.0)) < 1e-12);
  CHECK(std::abs(hs_g_bb(0, 2.5) - std::polar(1.0, -2.5) * 2.5) < 1e-14);
  const ComplexKernelPoint p = hs_g_aa(6, 1.5);
  CHECK(p.delta_weight == 1.0);
  CHECK(std::abs(p.smooth + s_oracle(6, 1.5)) < 1e-12);
  CHECK(std::abs(hs_g_aa(6, 0).smooth + 6.0 / 4.0) < 1e-14);
}

TEST_CASE("high-speed G_ab") {
  for (double z : {0.0, 3.0, 10.0}) CHECK(hs_G_ab(z, 0) == 0.0);
  for (double t : {0.1, 1.0, 2.75, 5.5}) {
    CHECK(std::abs(hs_G_ab(0, t, 4096) - std::sin(t)) < 1e-12);
    CHECK(std::abs(hs_G_ab(0, t) - std::sin(t)) < 1e-8);
  }
  const double a = hs_G_ab(10, 2.75, 512), b = hs_G_ab(10, 2.75, 1024);
  CHECK(std::abs(a - b) <= 1e-6 * std::abs(b));
  for (double z : {0.5, 4.0, 10.0})
    for (double t : {0.3, 2.0, 5.5}) {
      CAPTURE(z);
      CAPTURE(t);
      CHECK(std::abs(hs_G_ab(z, t) - hs_ab_oracle(z, t)) < 1e-9);
    }
  CHECK(hs_G_ba(2, 3) == hs_G_ab(2, 3));
  CHECK_THROWS_AS(hs_G_ab(1, 1, 3), UsageError);
}

TEST_CASE("high-speed G_ab stays real on the working grid") {
  reset_realness_residue();
  for (int i = 0; i < 50; ++i)
    for (int k = 0; k < 50; ++k) hs_G_ab(10.0 * i / 49, 5.5 * k / 49, 256);
  CHECK(max_realness_residue() <= kRealnessTolerance);
}

TEST_CASE("high-speed G_aa and G_bb against direct quadrature") {
  for (double z : {0.5, 4.0, 10.0})
    for (double t : {0.2, 1.7, 5.5}) {
      CAPTURE(z);
      CAPTURE(t);
      const KernelPoint aa = hs_G_aa(z, t);
      CHECK(aa.delta_weight == 1.0);
      CHECK(std::abs(aa.smooth - hs_aa_smooth_oracle(z, t)) < 1e-9);
      const KernelPoint bb = hs_G_bb(z, t, 4096);
      CHECK(bb.delta_weight == doctest::Approx(2 * std::cos(t)));
      CHECK(std::abs(bb.smooth - hs_bb_smooth_oracle(z, t)) < 1e-9);
      CHECK(std::abs(hs_G_bb(z, t).smooth - bb.smooth) < 1e-8);
    }
  CHECK(hs_G_bb(3, std::numbers::pi / 2).delta_weight == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(hs_G_aa(0, 2.0).smooth == 0.0);
  CHECK(hs_G_aa(4, 0).smooth == doctest::Approx(-2.0));
}

TEST_CASE("high-speed G_ac and G_bc") {
  const double a = hs_G_ac(5, 3, 512).smooth, b = hs_G_ac(5, 3, 1024).smooth;
  CHECK(std::abs(a - b) <= 1e-6 * (1.0 + std::abs(b)));
  for (double t : {0.0, 0.9, 4.0}) {
    CHECK(hs_G_bc(2, t).delta_weight == doctest::Approx(std::sin(t)).epsilon(1e-15));
    CHECK(hs_G_bc(2, t).smooth == doctest::Approx(-hs_G_ac(2, t).smooth));
  }
  CHECK(hs_G_ac(0, 1.2).smooth == doctest::Approx(std::cos(1.2)).epsilon(1e-12));
}

TEST_CASE("smooth kernels are finite and bounded on the working ranges") {
  for (double z = 0.0; z <= 10.0; z += 1.25)
    for (double t = 0.0; t <= 5.5; t += 0.55) {
      for (double v : {hs_G_ab(z, t, 64), hs_G_aa(z, t, 64).smooth, hs_G_bb(z, t, 64).smooth, hs_G_ac(z, t, 64).smooth}) {
        CHECK(std::isfinite(v));
        CHECK(std::abs(v) <= 10.0);
      }
    }
  for (double z = 0.0; z <= 55.0; z += 5.5)
    for (double t = 0.0; t <= 55.0; t += 5.5) {
      CHECK(ad_G_aa(z, t).smooth <= 1.0 + z);
      CHECK(std::isfinite(ad_G_bb(z, t).smooth));
    }
}

TEST_CASE("tabulated G_ab matches pointwise evaluation") {
  const std::vector<double> z = {0.0, 1.0, 2.5, 10.0};
  const UniformGrid t(0.0, 5.5, 64);
  const HighSpeedTable table = tabulate_hs_G_ab(z, t);
  REQUIRE(table.z_count == 4);
  REQUIRE(table.t_count == 65);
  for (int zi = 0; zi < 4; ++zi)
    for (int ti = 0; ti <= 64; ti += 8) CHECK(std::abs(table(zi, ti) - hs_G_ab(z[zi], t[ti], 2 * ti + (ti == 0 ? 2 : 0))) < 1e-13);
  CHECK(table.max_imag_residue <= kRealnessTolerance);
}

TEST_CASE("negative arguments are domain errors") {
  CHECK_THROWS_AS(ad_G_ba(-1, 1), DomainError);
  CHECK_THROWS_AS(ad_G_aa(1, -1), DomainError);
  CHECK_THROWS_AS(hs_g_ab(-1, 1), DomainError);
  CHECK_THROWS_AS(hs_G_ab(1, -1), DomainError);
}

TEST_CASE("dimensionless scaling") {
  const auto ad = DimensionlessScaling::adiabatic(1.0, 100.0, 50.0);
  CHECK(ad.C1 * ad.C2 == doctest::Approx(std::pow(2 * 50.0 * 1.0 / 100.0, 2)));
  CHECK(ad.length_scale() == ad.C1);
  CHECK(ad.time_scale() == ad.C2);
  CHECK(ad.coupling_ratio_p == doctest::Approx(1.0 / 50.0));
  CHECK_THROWS_AS(DimensionlessScaling::adiabatic(1.0, 5.0, 50.0), UsageError);
  const auto hs = DimensionlessScaling::high_speed(100.0, 1.0, 50.0);
  CHECK(hs.time_scale() == 100.0);
  CHECK(hs.length_scale() == doctest::Approx(2 * 2500.0 / 100.0));
  CHECK_THROWS_AS(DimensionlessScaling::high_speed(5.0, 1.0, 50.0), UsageError);
}
