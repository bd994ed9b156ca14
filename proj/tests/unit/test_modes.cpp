#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qmem/errors.hpp"
#include "qmem/modes.hpp"

using namespace qmem;

namespace {

ModelParams hs_backward() {
  ModelParams p;
  p.regime = Regime::high_speed;
  p.length = 10;
  p.write_time = p.read_time = 5.5;
  p.direction = Direction::backward;
  return p;
}

ModelParams ad_backward() {
  ModelParams p;
  p.regime = Regime::adiabatic;
  p.length = 55;
  p.write_time = p.read_time = 55;
  p.n_z = 512;
  p.direction = Direction::backward;
  return p;
}

// Top eigenvalues of A = M M^T by power iteration with Hotelling deflation.
std::vector<double> power_iteration_oracle(const KernelMatrix& k, int count) {
  const Eigen::MatrixXd M = k.w_t.cwiseSqrt().asDiagonal() * k.values * k.w_tp.cwiseSqrt().asDiagonal();
  Eigen::MatrixXd A = M * M.transpose();
  std::vector<double> out;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int c = 0; c < count; ++c) {
    Eigen::VectorXd v(A.rows());
    for (auto& x : v) x = nd(rng);
    v.normalize();
    double lambda = 0;
    for (int it = 0; it < 5000; ++it) {
      Eigen::VectorXd w = A * v;
      const double next = v.dot(w);
      const double n = w.norm();
      if (n == 0) break;
      v = w / n;
      if (std::abs(next - lambda) <= 1e-15 * std::abs(next) && it > 10) {
        lambda = next;
        break;
      }
      lambda = next;
    }
    out.push_back(lambda);
    A -= lambda * v * v.transpose();
  }
  return out;
}

Eigen::VectorXd sample(const UniformGrid& g, double (*f)(double)) {
  Eigen::VectorXd v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = f(g[i]);
  return v;
}

}  // namespace

TEST_CASE("zero kernel has zero eigenvalues") {
  const UniformGrid g(0, 2, 32);
  const ModeDecomposition d = decompose(KernelMatrix::from_values(Eigen::MatrixXd::Zero(33, 33), g, g));
  CHECK(d.lambdas.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rank-one kernel") {
  const UniformGrid g(0, 3, 64);
  // u normalized on [0, 3] under the grid quadrature
  Eigen::VectorXd u(g.size());
  for (int i = 0; i < g.size(); ++i) u[i] = std::sin(std::numbers::pi * g[i] / 3);
  u /= std::sqrt(g.simpson_weights().dot(u.cwiseAbs2()));
  const double mu = 0.64;
  const ModeDecomposition d = decompose(KernelMatrix::from_values(std::sqrt(mu) * u * u.transpose(), g, g));
  CHECK(d.method == DecompositionMethod::symmetric_eigen);
  CHECK(d.lambdas[0] == doctest::Approx(mu).epsilon(1e-12));
  CHECK(d.lambdas.tail(d.count() - 1).cwiseAbs().maxCoeff() < 1e-20);
  CHECK((d.modes.col(0) - u).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("asymmetric square kernel is a consistency error") {
  const UniformGrid g(0, 1, 16);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(17, 17);
  m(0, 5) = 0.3;
  CHECK_THROWS_AS(decompose(KernelMatrix::from_values(m, g, g)), NumericalConsistencyError);
}

TEST_CASE("high-speed backward decomposition") {
  const KernelMatrix k = build_full_kernel(hs_backward());
  const ModeDecomposition d = decompose(k);
  const int n = d.count();

  SUBCASE("eigenvalues agree with the power-iteration oracle") {
    const auto oracle = power_iteration_oracle(k, 7);
    for (int i = 0; i < 7; ++i) CHECK(std::abs(d.lambdas[i] - oracle[i]) <= 1e-10 * std::max(oracle[0], 1e-300));
    CHECK(d.lambdas[2] / d.lambdas[0] < 0.05);
    CHECK(oracle[2] / oracle[0] < 0.05);
  }
  SUBCASE("passive, sorted, orthonormal, sign convention") {
    for (int i = 0; i < n; ++i) {
      CHECK(d.lambdas[i] >= 0.0);
      CHECK(d.lambdas[i] <= 1.0 + 1e-6);
      if (i) CHECK(d.lambdas[i] <= d.lambdas[i - 1]);
    }
    const Eigen::MatrixXd gram = d.modes.transpose() * d.weights.asDiagonal() * d.modes;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
    for (int i = 0; i < 7; ++i) {
      const Eigen::VectorXd v = d.modes.col(i);
      const double peak = v.cwiseAbs().maxCoeff();
      for (int j = 0; j < v.size(); ++j)
        if (std::abs(v[j]) > 1e-6 * peak) {
          CHECK(v[j] > 0.0);
          break;
        }
    }
  }
  SUBCASE("modes reconstruct the kernel and are reproduced by it") {
    const Eigen::MatrixXd recon = d.modes * d.amplitudes.asDiagonal() * d.modes.transpose();
    CHECK((recon - k.values).norm() <= 1e-6 * k.values.norm());
    for (int i = 0; i < 5; ++i) {
      const Eigen::VectorXd psi = d.modes.col(i);
      const Eigen::VectorXd out = k.values * k.w_tp.cwiseProduct(psi);
      const Eigen::VectorXd diff = out - d.amplitudes[i] * psi;
      CHECK(std::sqrt(k.w_t.dot(diff.cwiseAbs2())) <= 1e-6);
    }
  }
  SUBCASE("localization of the two leading modes") {
    CHECK(localization_fraction(d.modes.col(0), d.grid, 0.0, 2.75) >= 0.8);
    CHECK(localization_fraction(d.modes.col(1), d.grid, 2.75, 5.5) >= 0.8);
    CHECK(localization_fraction(d.modes.col(3), d.grid, 0.0, 5.5) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("eigenvalues and spectral width are stable under grid doubling") {
    const ModeDecomposition d2 = decompose(build_full_kernel(hs_backward().with_grid_scale(2)));
    for (int i = 0; i < 7; ++i)
      if (d.lambdas[i] >= 1e-2) CHECK(std::abs(d2.lambdas[i] - d.lambdas[i]) <= 1e-6 * d.lambdas[i]);
    const Eigen::VectorXd w = frequency_grid(20, 2001);
    const double f1 = spectral_fwhm(mode_spectrum(d.modes.col(0), d.grid, w), w);
    const double f2 = spectral_fwhm(mode_spectrum(d2.modes.col(0), d2.grid, w), w);
    CHECK(std::abs(f1 - f2) <= 0.02 * f1);
    const Eigen::VectorXd s = mode_spectrum(d.modes.col(0), d.grid, w);
    Eigen::Index peak;
    s.maxCoeff(&peak);
    CHECK(std::abs(w[peak]) < 1e-9);
  }
}

TEST_CASE("adiabatic eigenvalues decay more slowly than high-speed ones") {
  const ModeDecomposition hs = decompose(build_full_kernel(hs_backward()));
  const KernelMatrix k = build_full_kernel(ad_backward());
  const ModeDecomposition ad = decompose(k);
  CHECK(ad.lambdas[2] / ad.lambdas[0] > hs.lambdas[2] / hs.lambdas[0]);
  const auto oracle = power_iteration_oracle(k, 7);
  for (int i = 0; i < 7; ++i) CHECK(std::abs(ad.lambdas[i] - oracle[i]) <= 1e-10);
}

TEST_CASE("unequal read and write times use the singular value decomposition") {
  ModelParams p = hs_backward();
  p.read_time = 2.75;
  const KernelMatrix k = build_full_kernel(p);
  const ModeDecomposition d = decompose(k);
  CHECK(d.method == DecompositionMethod::svd);
  CHECK(d.modes.rows() == k.tp_grid.size());
  CHECK(d.output_modes.rows() == k.t_grid.size());
  // G psi_i = sigma_i phi_i
  for (int i = 0; i < 3; ++i) {
    const Eigen::VectorXd out = k.values * k.w_tp.cwiseProduct(d.modes.col(i));
    const Eigen::VectorXd diff = out - d.amplitudes[i] * d.output_modes.col(i);
    CHECK(std::sqrt(k.w_t.dot(diff.cwiseAbs2())) <= 1e-10);
    CHECK(d.lambdas[i] <= 1.0 + 1e-6);
  }
  const Eigen::MatrixXd gram = d.modes.transpose() * d.weights.asDiagonal() * d.modes;
  CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("spectra of simple profiles") {
  const double T = 4.0;
  const UniformGrid g(0, T, 400);
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(g.size(), 1 / std::sqrt(T));
  const Eigen::VectorXd w = frequency_grid(30, 3001);
  const Eigen::VectorXd s = mode_spectrum(flat, g, w);
  for (Eigen::Index i = 0; i < w.size(); i += 97) {
    const double x = w[i] * T / 2;
    const double sinc = x == 0 ? 1.0 : std::sin(x) / x;
    CHECK(std::abs(s[i] - std::abs(sinc)) < 1e-6);
  }
  CHECK(s[1500] == doctest::Approx(1.0).epsilon(1e-12));
  const double fwhm = spectral_fwhm(s, w);
  CHECK(std::abs(fwhm - 7.5786 / T) <= 0.02 * 7.5786 / T);
  const UniformGrid g2(0, 2 * T, 800);
  const Eigen::VectorXd flat2 = Eigen::VectorXd::Constant(g2.size(), 1 / std::sqrt(2 * T));
  CHECK(spectral_fwhm(mode_spectrum(flat2, g2, w), w) == doctest::Approx(fwhm / 2).epsilon(0.01));

  const Eigen::VectorXd odd = sample(g, [](double t) { return std::cos(std::numbers::pi * t / 4.0); });
  const Eigen::VectorXd zero_freq(Eigen::VectorXd::Zero(1));
  CHECK(mode_spectrum(odd, g, zero_freq)[0] < 1e-12);
}

TEST_CASE("spectral width errors and localization preconditions") {
  const Eigen::VectorXd w = frequency_grid(1, 11);
  const Eigen::VectorXd wide = Eigen::VectorXd::Ones(11);
  CHECK_THROWS_AS(spectral_fwhm(wide, w), RangeError);
  const UniformGrid g(0, 1, 16);
  const Eigen::VectorXd v = Eigen::VectorXd::Ones(17);
  CHECK_THROWS_AS(localization_fraction(v, g, 0.5, 0.2), UsageError);
  CHECK_THROWS_AS(localization_fraction(v, g, -0.1, 0.2), UsageError);
  // a cut through a cell falls back to piecewise-linear integration
  CHECK(localization_fraction(v, g, 0.0, 0.33) == doctest::Approx(0.33).epsilon(1e-12));
}
