#include "qmem/modes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qmem/errors.hpp"

namespace qmem {

std::string_view to_string(DecompositionMethod m) {
  return m == DecompositionMethod::symmetric_eigen ? "symmetric_eigen" : "svd";
}

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v, Eigen::Ref<Eigen::VectorXd> partner) {
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) > 1e-6 * peak) {
      if (v[k] < 0.0) {
        v = -v;
        partner = -partner;
      }
      return;
    }
  }
}

}  // namespace

ModeDecomposition decompose(const KernelMatrix& kernel) {
  const Eigen::VectorXd sqrt_wt = kernel.w_t.cwiseSqrt();
  const Eigen::VectorXd sqrt_wtp = kernel.w_tp.cwiseSqrt();
  const Eigen::MatrixXd M = sqrt_wt.asDiagonal() * kernel.values * sqrt_wtp.asDiagonal();

  ModeDecomposition d;
  d.grid = kernel.tp_grid;
  d.output_grid = kernel.t_grid;
  d.weights = kernel.w_tp;
  const Eigen::Index n = M.cols();

  if (kernel.is_square()) {
    const double norm = M.norm();
    const double asym = (M - M.transpose()).norm();
    if (norm > 0.0 && asym > kSymmetryTolerance * norm)
      throw NumericalConsistencyError("square kernel is not symmetric: relative asymmetry " +
                                      std::to_string(asym / norm));
    d.method = DecompositionMethod::symmetric_eigen;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    if (es.info() != Eigen::Success) throw NumericalConsistencyError("symmetric eigensolver failed");
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXd& ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(ev[a]) > std::abs(ev[b]); });
    d.amplitudes.resize(n);
    d.lambdas.resize(n);
    d.modes.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      d.amplitudes[i] = ev[order[i]];
      d.lambdas[i] = ev[order[i]] * ev[order[i]];
      Eigen::VectorXd col = es.eigenvectors().col(order[i]).cwiseQuotient(sqrt_wtp);
      Eigen::VectorXd unused(0);
      fix_sign(col, unused);
      d.modes.col(i) = col;
    }
    d.output_modes = d.modes;
  } else {
    d.method = DecompositionMethod::svd;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::Index r = svd.singularValues().size();
    d.amplitudes = svd.singularValues();
    d.lambdas = d.amplitudes.cwiseAbs2();
    d.modes.resize(n, r);
    d.output_modes.resize(M.rows(), r);
    for (Eigen::Index i = 0; i < r; ++i) {
      Eigen::VectorXd v = svd.matrixV().col(i).cwiseQuotient(sqrt_wtp);
      Eigen::VectorXd u = svd.matrixU().col(i).cwiseQuotient(sqrt_wt);
      fix_sign(v, u);
      d.modes.col(i) = v;
      d.output_modes.col(i) = u;
    }
  }
  return d;
}

Eigen::VectorXd mode_spectrum(const Eigen::VectorXd& mode, const UniformGrid& grid, const Eigen::VectorXd& omegas) {
  if (mode.size() != grid.size()) throw UsageError("mode length does not match grid");
  const Eigen::VectorXd w = grid.simpson_weights();
  const double norm = 1.0 / std::sqrt(grid.length());
  Eigen::VectorXd out(omegas.size());
  for (Eigen::Index m = 0; m < omegas.size(); ++m) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < grid.size(); ++k)
      acc += w[k] * mode[k] * std::polar(1.0, omegas[m] * grid[k]);
    out[m] = norm * std::abs(acc);
  }
  return out;
}

Eigen::VectorXd frequency_grid(double omega_max, int points) {
  if (points < 2 || !(omega_max > 0.0)) throw UsageError("frequency grid needs >= 2 points and positive extent");
  return Eigen::VectorXd::LinSpaced(points, -omega_max, omega_max);
}

double localization_fraction(const Eigen::VectorXd& mode, const UniformGrid& grid, double t1, double t2) {
  if (mode.size() != grid.size()) throw UsageError("mode length does not match grid");
  if (!(t1 < t2) || t1 < grid.start || t2 > grid.stop) throw UsageError("localization interval must lie inside the grid");
  const double h = grid.step();
  const Eigen::VectorXd sq = mode.cwiseAbs2();
  const double p1 = (t1 - grid.start) / h, p2 = (t2 - grid.start) / h;
  const long i1 = std::lround(p1), i2 = std::lround(p2);
  const bool aligned = std::abs(p1 - i1) < 1e-9 && std::abs(p2 - i2) < 1e-9;
  if (aligned) {
    const double total = grid.simpson_weights().dot(sq);
    if (total == 0.0) return 0.0;
    const Eigen::VectorXd w = simpson_weights(static_cast<int>(i2 - i1), h);
    return w.dot(sq.segment(i1, i2 - i1 + 1)) / total;
  }
  // piecewise-linear psi^2 for intervals cutting through cells
  auto integral = [&](double a, double b) {
    double acc = 0.0;
    for (int k = 0; k < grid.intervals; ++k) {
      const double lo = std::max(a, grid[k]), hi = std::min(b, grid[k + 1]);
      if (hi <= lo) continue;
      auto at = [&](double t) { return sq[k] + (sq[k + 1] - sq[k]) * (t - grid[k]) / h; };
      acc += 0.5 * (at(lo) + at(hi)) * (hi - lo);
    }
    return acc;
  };
  const double total = integral(grid.start, grid.stop);
  return total == 0.0 ? 0.0 : integral(t1, t2) / total;
}

double spectral_fwhm(const Eigen::VectorXd& spectrum, const Eigen::VectorXd& omegas) {
  if (spectrum.size() != omegas.size() || spectrum.size() < 3) throw UsageError("spectrum and frequency grid mismatch");
  Eigen::Index peak = 0;
  const double top = spectrum.maxCoeff(&peak);
  const double half = 0.5 * top;
  auto cross = [&](Eigen::Index from, Eigen::Index to) {
    return omegas[from] + (half - spectrum[from]) * (omegas[to] - omegas[from]) / (spectrum[to] - spectrum[from]);
  };
  Eigen::Index l = peak;
  while (l > 0 && spectrum[l - 1] > half) --l;
  if (l == 0) throw RangeError("no half-maximum crossing below the peak within the frequency grid");
  Eigen::Index r = peak;
  while (r + 1 < spectrum.size() && spectrum[r + 1] > half) ++r;
  if (r + 1 == spectrum.size()) throw RangeError("no half-maximum crossing above the peak within the frequency grid");
  return cross(r, r + 1) - cross(l - 1, l);
}

}  // namespace qmem
