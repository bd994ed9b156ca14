#include <cmath>
#include <string>

#include "qmem/errors.hpp"
#include "qmem/green_kernels.hpp"
#include "qmem/simd.hpp"
#include "qmem/specfun.hpp"

namespace qmem::green {

// G_ab(z, t_n) = int_0^{t_n} cos(t_n - 2 tau) f(t_n - tau) f(tau) dtau with f(tau) = J0(sqrt(tau z)),
// plus the imaginary part -int sin(t_n - 2 tau) f f, which the tau -> t_n - tau symmetry cancels.
// Splitting cos(t_n - 2 tau) = cos t_n cos 2tau + sin t_n sin 2tau turns each entry into two
// reductions against the reversed samples of f.
HighSpeedTable tabulate_hs_G_ab(std::span<const double> z_nodes, const UniformGrid& t_grid) {
  if (t_grid.start != 0.0) throw UsageError("tabulate_hs_G_ab: time grid must start at 0");
  const int n_t = t_grid.size();
  const int m = 2 * t_grid.intervals;  // sub-steps
  const double h = t_grid.step() / 2.0;

  HighSpeedTable table;
  table.z_count = static_cast<int>(z_nodes.size());
  table.t_count = n_t;
  table.values.assign(static_cast<std::size_t>(table.z_count) * n_t, 0.0);

  std::vector<double> tau(m + 1), c2(m + 1), s2(m + 1), base(m + 1);
  for (int k = 0; k <= m; ++k) {
    tau[k] = k * h;
    c2[k] = std::cos(2.0 * tau[k]);
    s2[k] = std::sin(2.0 * tau[k]);
    base[k] = k == 0 ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
  }

  std::vector<double> f(m + 1), rev(m + 1), u(m + 1), v(m + 1);
  for (int zi = 0; zi < table.z_count; ++zi) {
    const double z = z_nodes[zi];
    if (z < 0.0 || !std::isfinite(z)) throw DomainError("tabulate_hs_G_ab: invalid z node");
    for (int k = 0; k <= m; ++k) f[k] = specfun::bessel_j0(std::sqrt(tau[k] * z));
    for (int k = 0; k <= m; ++k) {
      rev[k] = f[m - k];
      u[k] = base[k] * c2[k] * f[k];
      v[k] = base[k] * s2[k] * f[k];
    }
    double* out = table.values.data() + static_cast<std::size_t>(zi) * n_t;
    out[0] = 0.0;
    for (int n = 1; n < n_t; ++n) {
      const int K = 2 * n;
      // sum_{k<K} base_k (c2|s2)_k f_k f_{K-k}; f_{K-k} = rev[m-K+k]
      auto [p, q] = simd::dot_pair(std::span<const double>(u.data(), K), std::span<const double>(v.data(), K),
                                   std::span<const double>(rev.data() + (m - K), K));
      p += c2[K] * f[K] * f[0];
      q += s2[K] * f[K] * f[0];
      p *= h / 3.0;
      q *= h / 3.0;
      const double t = t_grid[n];
      const double ct = std::cos(t), st = std::sin(t);
      const double re = ct * p + st * q;
      const double im = ct * q - st * p;
      const double residue = std::fabs(im) / (1.0 + std::fabs(re));
      if (residue > table.max_imag_residue) table.max_imag_residue = residue;
      if (residue > kRealnessTolerance)
        throw NumericalConsistencyError("tabulate_hs_G_ab: imaginary residue " + std::to_string(residue));
      out[n] = re;
    }
  }
  return table;
}

}  // namespace qmem::green
