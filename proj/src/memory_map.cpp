#include "qmem/memory_map.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qmem/errors.hpp"
#include "qmem/simd.hpp"

namespace qmem {

std::string_view to_string(Regime r) { return r == Regime::adiabatic ? "adiabatic" : "high_speed"; }
std::string_view to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

void ModelParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(name) + " must be positive and finite");
  };
  positive(length, "L");
  positive(write_time, "T_W");
  positive(read_time, "T_R");
  auto grid = [](int n, const char* name) {
    if (n < 16 || n % 2 != 0) throw UsageError(std::string(name) + " must be even and >= 16");
  };
  grid(n_t, "n_t");
  grid(n_tp, "n_tp");
  grid(n_z, "n_z");
}

ModelParams ModelParams::with_grid_scale(int k) const {
  if (k < 1) throw UsageError("grid scale must be >= 1");
  ModelParams p = *this;
  p.n_t *= k;
  p.n_tp *= k;
  p.n_z *= k;
  return p;
}

ModelParams ModelParams::with_read_time(double t_r) const {
  ModelParams p = *this;
  p.read_time = t_r;
  return p;
}

KernelMatrix KernelMatrix::from_values(Eigen::MatrixXd values, const UniformGrid& t_grid,
                                       const UniformGrid& tp_grid) {
  if (values.rows() != t_grid.size() || values.cols() != tp_grid.size())
    throw UsageError("kernel values do not match grid sizes");
  KernelMatrix k;
  k.values = std::move(values);
  k.t_grid = t_grid;
  k.tp_grid = tp_grid;
  k.w_t = t_grid.simpson_weights();
  k.w_tp = tp_grid.simpson_weights();
  return k;
}

bool KernelMatrix::is_square() const { return t_grid == tp_grid; }

Eigen::VectorXd KernelMatrix::apply(const InputProfile& input) const {
  Eigen::VectorXd reversed(tp_grid.size());
  const double tw = tp_grid.stop;
  for (int j = 0; j < tp_grid.size(); ++j) reversed[j] = input(tw - tp_grid[j]);
  return apply_reversed(reversed);
}

Eigen::VectorXd KernelMatrix::apply_reversed(const Eigen::VectorXd& reversed) const {
  if (reversed.size() != tp_grid.size()) throw UsageError("input samples do not match the kernel input grid");
  return values * w_tp.cwiseProduct(reversed);
}

namespace {

// Rows indexed by time node, columns by z node, so each kernel entry is a
// contiguous weighted reduction over z.
struct TimeByZ {
  int t_count = 0;
  int z_count = 0;
  std::vector<double> data;
  std::span<const double> row(int ti) const {
    return {data.data() + static_cast<std::size_t>(ti) * z_count, static_cast<std::size_t>(z_count)};
  }
};

// G_ab(z_k, t_i) (reverse_z: G_ab(L - z_k, t_i)) for the regime.
TimeByZ tabulate_G_ab(Regime regime, const UniformGrid& z_grid, const UniformGrid& t_grid, bool reverse_z) {
  TimeByZ out;
  out.t_count = t_grid.size();
  out.z_count = z_grid.size();
  out.data.assign(static_cast<std::size_t>(out.t_count) * out.z_count, 0.0);
  const std::vector<double> z_nodes = z_grid.nodes();
  const int last = out.z_count - 1;
  if (regime == Regime::adiabatic) {
    for (int i = 0; i < out.t_count; ++i)
      for (int k = 0; k < out.z_count; ++k)
        out.data[static_cast<std::size_t>(i) * out.z_count + k] =
            green::ad_G_ba(z_nodes[reverse_z ? last - k : k], t_grid[i]);
  } else {
    const green::HighSpeedTable table = green::tabulate_hs_G_ab(z_nodes, t_grid);
    for (int i = 0; i < out.t_count; ++i)
      for (int k = 0; k < out.z_count; ++k)
        out.data[static_cast<std::size_t>(i) * out.z_count + k] = table(reverse_z ? last - k : k, i);
  }
  return out;
}

double prefactor(Regime regime) { return regime == Regime::high_speed ? 0.5 : 1.0; }

}  // namespace

KernelMatrix build_full_kernel(const ModelParams& params) {
  params.validate();
  const UniformGrid z_grid = params.z_grid();
  const UniformGrid t_grid = params.t_grid();
  const UniformGrid tp_grid = params.tp_grid();

  const TimeByZ write = tabulate_G_ab(params.regime, z_grid, tp_grid, false);
  const bool same_grid = (t_grid == tp_grid);
  const bool reverse = params.direction == Direction::forward;
  TimeByZ read_storage;
  if (!same_grid || reverse) read_storage = tabulate_G_ab(params.regime, z_grid, t_grid, reverse);
  const TimeByZ& read = (!same_grid || reverse) ? read_storage : write;

  const Eigen::VectorXd wz = z_grid.simpson_weights();
  const Eigen::VectorXd wz_coarse = coarse_simpson_weights(z_grid.intervals, z_grid.step());
  const std::span<const double> wz_span(wz.data(), wz.size());
  const std::span<const double> wzc_span(wz_coarse.data(), wz_coarse.size());
  const double pref = prefactor(params.regime);

  Eigen::MatrixXd values(t_grid.size(), tp_grid.size());
  double diff2 = 0.0, norm2 = 0.0;
  for (int i = 0; i < t_grid.size(); ++i) {
    for (int j = 0; j < tp_grid.size(); ++j) {
      const double fine = pref * simd::dot3(wz_span, read.row(i), write.row(j));
      const double coarse = pref * simd::dot3(wzc_span, read.row(i), write.row(j));
      values(i, j) = fine;
      diff2 += (fine - coarse) * (fine - coarse);
      norm2 += fine * fine;
    }
  }

  KernelMatrix k = KernelMatrix::from_values(std::move(values), t_grid, tp_grid);
  k.params = params;
  k.z_error_estimate = norm2 > 0.0 ? std::sqrt(diff2 / norm2) / 15.0 : 0.0;
  if (k.z_error_estimate > kZQuadratureTolerance)
    throw AccuracyError("z quadrature not converged: estimated relative error " +
                        std::to_string(k.z_error_estimate) + " (increase n_z)");
  return k;
}

SpatialProfile write_coherence_profile(const InputProfile& input, const ModelParams& params, double coupling_ratio) {
  params.validate();
  if (!(coupling_ratio > 0.0)) throw UsageError("coupling ratio must be positive");
  const UniformGrid z_grid = params.z_grid();
  const UniformGrid tp_grid = params.tp_grid();
  const TimeByZ table = tabulate_G_ab(params.regime, z_grid, tp_grid, false);
  const Eigen::VectorXd w = tp_grid.simpson_weights();
  const int last = tp_grid.size() - 1;

  // b(z) = -(1/p) sum_j w_j a_in(t'_j) G_ab(z, T_W - t'_j), with T_W - t'_j = t'_{last - j}
  Eigen::VectorXd weighted_input(tp_grid.size());
  for (int j = 0; j <= last; ++j) weighted_input[j] = w[j] * input(tp_grid[j]);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(z_grid.size());
  for (int j = 0; j <= last; ++j) {
    const auto row = table.row(last - j);
    for (int k = 0; k < z_grid.size(); ++k) b[k] += weighted_input[j] * row[k];
  }
  return {z_grid, -b / coupling_ratio};
}

TemporalProfile leakage_field(const InputProfile& input, const ModelParams& params) {
  params.validate();
  const UniformGrid grid = params.tp_grid();
  const double L = params.length;
  const int m = 2 * grid.intervals;
  const double h = grid.step() / 2.0;

  // smooth part of G_aa(L, s) on the half-step grid
  std::vector<double> kernel(m + 1);
  double delta_weight = 1.0;
  for (int k = 0; k <= m; ++k) {
    const double s = k * h;
    if (params.regime == Regime::adiabatic) {
      const green::KernelPoint p = green::ad_G_aa(L, s);
      kernel[k] = p.smooth;
      delta_weight = p.delta_weight;
    } else {
      const int intervals = std::max(2, k + (k % 2));
      kernel[k] = green::hs_G_aa(L, s, intervals).smooth;
    }
  }

  Eigen::VectorXd out(grid.size());
  for (int n = 0; n < grid.size(); ++n) {
    const double t = grid[n];
    double conv = 0.0;
    const int K = 2 * n;
    for (int k = 0; k <= K; ++k) {
      const double w = (k == 0 || k == K) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      conv += w * input(t - k * h) * kernel[k];
    }
    conv *= h / 3.0;
    out[n] = delta_weight * input(t) + conv;
  }
  return {grid, out};
}

}  // namespace qmem
