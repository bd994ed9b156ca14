// Direct integration of the scaled propagation equations.
//
// Adiabatic:   da/dz = -a - B,      dB/dt = -B - a
// High-speed:  da/dz = -C/2,        dC/dt = a + B,   dB/dt = -C
//
// B is the spin coherence scaled by the coupling ratio, C the optical
// coherence. Each equation is discretized with the trapezoid rule along its
// own characteristic: the z equation between neighbouring z nodes at the new
// time level, the t equations between successive time levels at a fixed z
// node. The unknowns at each new node then follow from a small linear solve.
// The scheme is second order and A-stable for both systems.

#include <algorithm>
#include <cmath>
#include <vector>

#include "qmem/errors.hpp"
#include "qmem/memory_map.hpp"

namespace qmem {
namespace {

struct Fields {
  std::vector<double> a, B, C;
  explicit Fields(int n) : a(n, 0.0), B(n, 0.0), C(n, 0.0) {}
};

class Integrator {
 public:
  Integrator(Regime regime, double dz, double bound) : regime_(regime), dz_(dz), bound_(bound) {}

  // First time level: only the z equation applies.
  void initial_column(Fields& f, double a0) const {
    f.a[0] = a0;
    const std::size_t n = f.a.size();
    if (regime_ == Regime::adiabatic) {
      const double h = dz_ / 2.0;
      for (std::size_t k = 0; k + 1 < n; ++k)
        f.a[k + 1] = (f.a[k] * (1.0 - h) - h * (f.B[k] + f.B[k + 1])) / (1.0 + h);
    } else {
      const double h = dz_ / 4.0;
      for (std::size_t k = 0; k + 1 < n; ++k) f.a[k + 1] = f.a[k] - h * (f.C[k] + f.C[k + 1]);
    }
    check(f);
  }

  // Advance all z nodes from `old` to `next` over a time step dt, with
  // boundary value a0 at z = 0.
  void step(const Fields& old, Fields& next, double dt, double a0) const {
    const std::size_t n = old.a.size();
    next.a[0] = a0;
    const double ht = dt / 2.0;
    if (regime_ == Regime::adiabatic) {
      const double hz = dz_ / 2.0;
      next.B[0] = (old.B[0] * (1.0 - ht) - ht * (old.a[0] + a0)) / (1.0 + ht);
      const double det = (1.0 + hz) * (1.0 + ht) - hz * ht;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double r1 = next.a[k] * (1.0 - hz) - hz * next.B[k];
        const double r2 = old.B[k + 1] * (1.0 - ht) - ht * old.a[k + 1];
        next.a[k + 1] = (r1 * (1.0 + ht) - hz * r2) / det;
        next.B[k + 1] = ((1.0 + hz) * r2 - ht * r1) / det;
      }
    } else {
      const double hz = dz_ / 4.0;
      const double denom = 1.0 + ht * hz + ht * ht;
      auto local = [&](std::size_t k, double a_new, double& B_new, double& C_new) {
        // C' - ht (a' + B') = rC,  B' + ht C' = rB, with a' known
        const double rC = old.C[k] + ht * (old.a[k] + old.B[k]);
        const double rB = old.B[k] - ht * old.C[k];
        C_new = (rC + ht * (a_new + rB)) / (1.0 + ht * ht);
        B_new = rB - ht * C_new;
      };
      local(0, a0, next.B[0], next.C[0]);
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double r1 = next.a[k] - hz * next.C[k];
        const double rC = old.C[k + 1] + ht * (old.a[k + 1] + old.B[k + 1]);
        const double rB = old.B[k + 1] - ht * old.C[k + 1];
        const double c = (rC + ht * (r1 + rB)) / denom;
        next.C[k + 1] = c;
        next.a[k + 1] = r1 - hz * c;
        next.B[k + 1] = rB - ht * c;
      }
    }
    check(next);
  }

 private:
  void check(const Fields& f) const {
    auto over = [this](double v) { return !std::isfinite(v) || std::abs(v) > bound_; };
    if (std::any_of(f.a.begin(), f.a.end(), over) || std::any_of(f.B.begin(), f.B.end(), over) ||
        std::any_of(f.C.begin(), f.C.end(), over))
      throw IntegrationError("direct integration unstable: field exceeded the growth bound");
  }

  Regime regime_;
  double dz_;
  double bound_;
};

}  // namespace

DirectIntegration direct_integrate(const InputProfile& input, const ModelParams& params, int refinement) {
  params.validate();
  if (refinement < 1) throw UsageError("refinement must be >= 1");
  const ModelParams fine = params.with_grid_scale(refinement);
  const UniformGrid z_grid = fine.z_grid();
  const UniformGrid write_grid = fine.tp_grid();
  const UniformGrid read_grid = fine.t_grid();
  const int nz = z_grid.size();

  double peak = 0.0;
  for (int n = 0; n < write_grid.size(); ++n) peak = std::max(peak, std::abs(input(write_grid[n])));
  const Integrator integ(params.regime, z_grid.step(), kIntegrationBlowup * peak);

  const UniformGrid leak_grid = params.tp_grid();
  Eigen::VectorXd leak(leak_grid.size());
  Fields cur(nz), nxt(nz);
  integ.initial_column(cur, input(write_grid[0]));
  leak[0] = cur.a[nz - 1];
  for (int n = 1; n < write_grid.size(); ++n) {
    integ.step(cur, nxt, write_grid.step(), input(write_grid[n]));
    std::swap(cur, nxt);
    if (n % refinement == 0) leak[n / refinement] = cur.a[nz - 1];
  }

  DirectIntegration result;
  result.refinement = refinement;
  result.leakage = {leak_grid, leak};
  result.stored_coherence = {z_grid, Eigen::Map<const Eigen::VectorXd>(cur.B.data(), nz)};

  Fields read(nz);
  for (int k = 0; k < nz; ++k)
    read.B[k] = params.direction == Direction::backward ? cur.B[nz - 1 - k] : cur.B[k];
  integ.initial_column(read, 0.0);

  const UniformGrid out_grid = params.t_grid();
  Eigen::VectorXd out(out_grid.size());
  out[0] = read.a[nz - 1];
  Fields next(nz);
  for (int n = 1; n < read_grid.size(); ++n) {
    integ.step(read, next, read_grid.step(), 0.0);
    std::swap(read, next);
    if (n % refinement == 0) out[n / refinement] = read.a[nz - 1];
  }
  result.output = {out_grid, out};
  return result;
}

}  // namespace qmem
