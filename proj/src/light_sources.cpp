#include "qmem/light_sources.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmem/errors.hpp"

namespace qmem {

std::string_view to_string(SourceKind k) { return k == SourceKind::laser ? "laser" : "dopo"; }
std::string_view to_string(Quadrature q) { return q == Quadrature::x ? "x" : "y"; }

void SourceParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw UsageError("source.kappa must be positive and finite");
  if (kind == SourceKind::laser) {
    if (!(mu > 0.0 && mu <= kMuLimit)) throw UsageError("source.mu must lie in (0, 0.2]");
    if (!(pump_order_p >= 0.0 && pump_order_p <= 1.0)) throw UsageError("source.p must lie in [0, 1]");
  } else {
    if (!(s > 0.0 && s < 1.0)) throw UsageError("source.s must lie in (0, 1)");
  }
}

std::vector<std::string> SourceParams::warnings(double pulse_duration) const {
  std::vector<std::string> out;
  if (kind == SourceKind::laser && mu > kMuWarn) out.emplace_back("source.mu above 0.1: small-locking approximation strained");
  if (pulse_duration > 0.0 && kappa * pulse_duration < 10.0)
    out.emplace_back("kappa * T below 10: pulse squeezing depends strongly on duration");
  return out;
}

double ExponentialCorrelator::operator()(double tau) const { return amplitude * std::exp(-rate * std::abs(tau)); }

double ExponentialCorrelator::spectrum(double omega) const { return 2.0 * amplitude * rate / (rate * rate + omega * omega); }

ExponentialCorrelator correlator_shape(const SourceParams& p, Quadrature q) {
  const double k = p.kappa;
  if (p.kind == SourceKind::laser) {
    if (q == Quadrature::x)
      return {-(p.pump_order_p / 8.0) * (1.0 - p.mu) / (1.0 - p.mu / 2.0), k * (1.0 - p.mu / 2.0)};
    return {(1.0 - p.mu) / p.mu, k * p.mu / 2.0};
  }
  if (q == Quadrature::y) return {-p.s / (4.0 * (1.0 + p.s)), k * (1.0 + p.s) / 2.0};
  return {p.s / (4.0 * (1.0 - p.s)), k * (1.0 - p.s) / 2.0};
}

double stationary_spectrum(const SourceParams& p, Quadrature q, double omega) {
  const double k = p.kappa, w2 = omega * omega;
  if (p.kind == SourceKind::laser) {
    if (q == Quadrature::x) {
      const double kx = k * (1.0 - p.mu / 2.0);
      return -p.pump_order_p * (1.0 - p.mu) / 4.0 * k / (kx * kx + w2);
    }
    return (1.0 - p.mu) / 2.0 * k / (k * k * p.mu * p.mu / 4.0 + w2);
  }
  if (q == Quadrature::y) {
    const double ky = k * (1.0 + p.s) / 2.0;
    return -0.25 * k * p.s / (ky * ky + w2);
  }
  const double kx = k * (1.0 - p.s) / 2.0;
  return 0.25 * k * p.s / (kx * kx + w2);
}

double time_correlator(const SourceParams& p, Quadrature q, double tau) { return correlator_shape(p, q)(tau); }

CorrelatorMatrix CorrelatorMatrix::from_samples(Eigen::MatrixXd values, const UniformGrid& grid, Quadrature q) {
  if (values.rows() != grid.size() || values.cols() != grid.size())
    throw UsageError("correlator samples do not match grid");
  const Eigen::VectorXd w = grid.simpson_weights();
  CorrelatorMatrix c;
  c.form = w.asDiagonal() * values * w.asDiagonal();
  c.values = std::move(values);
  c.grid = grid;
  c.quadrature = q;
  return c;
}

namespace {

// Weights of int_0^h e^{-k u} (1 - u/h) du and int_0^h e^{-k u} (u/h) du.
std::pair<double, double> hat_weights(double k, double h) {
  const double x = k * h;
  if (x < 1e-3) return {h * (0.5 - x / 6.0 + x * x / 24.0), h * (0.5 - x / 3.0 + x * x / 8.0)};
  const double e = std::exp(-x);
  return {h * (x - 1.0 + e) / (x * x), h * (1.0 - e * (1.0 + x)) / (x * x)};
}

}  // namespace

CorrelatorMatrix exponential_correlator_matrix(const ExponentialCorrelator& c, const UniformGrid& grid, Quadrature q) {
  const int n = grid.size();
  const double h = grid.step();
  const auto [near, far] = hat_weights(c.rate, h);
  const Eigen::VectorXd w = grid.simpson_weights();

  Eigen::MatrixXd values(n, n), inner = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> decay(n);
  for (int d = 0; d < n; ++d) decay[d] = std::exp(-c.rate * h * d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) values(i, j) = c.amplitude * decay[std::abs(i - j)];
    // cells to the right of t_i: near end is the left node
    for (int j = i; j + 1 < n; ++j) {
      inner(i, j) += decay[j - i] * near;
      inner(i, j + 1) += decay[j - i] * far;
    }
    // cells to the left of t_i: near end is the right node
    for (int j = 0; j + 1 <= i; ++j) {
      inner(i, j + 1) += decay[i - j - 1] * near;
      inner(i, j) += decay[i - j - 1] * far;
    }
  }
  Eigen::MatrixXd form = c.amplitude * (w.asDiagonal() * inner);
  CorrelatorMatrix m;
  m.form = 0.5 * (form + form.transpose());
  m.values = std::move(values);
  m.grid = grid;
  m.quadrature = q;
  return m;
}

CorrelatorMatrix extracavity_correlator_matrix(const SourceParams& p, const UniformGrid& grid) {
  p.validate();
  const Quadrature q = p.squeezed_quadrature();
  ExponentialCorrelator c = correlator_shape(p, q);
  c.amplitude *= p.kappa;
  return exponential_correlator_matrix(c, grid, q);
}

std::complex<double> windowed_delta(double omega, double omega_prime, double T) {
  if (!(T > 0.0)) throw UsageError("window duration must be positive");
  const double x = (omega + omega_prime) * T / 2.0;
  const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
  return sinc * std::polar(1.0, x);
}

namespace {

// 2 Re[(1 - e^{-k T + i w T}) / (k - i w)^2]
double finite_window_term(double k, double omega, double T) {
  using C = std::complex<double>;
  const C num = 1.0 - std::exp(C(-k * T, omega * T));
  const C den = C(k, -omega) * C(k, -omega);
  return 2.0 * (num / den).real();
}

}  // namespace

double input_squeezing(const SourceParams& p, double T, double omega) {
  p.validate();
  if (!(T > 0.0)) throw UsageError("pulse duration must be positive");
  const double k = p.kappa;
  if (p.kind == SourceKind::laser) {
    const double kx = k * (1.0 - p.mu / 2.0);
    const double a = p.pump_order_p * k * k * (1.0 - p.mu);
    return 1.0 - a / (kx * kx + omega * omega) + a / (2.0 * kx * T) * finite_window_term(kx, omega, T);
  }
  const double ky = k * (1.0 + p.s) / 2.0;
  const double r = p.s / (1.0 + p.s);
  const double stationary = 1.0 - k * r * (2.0 * ky / (ky * ky + omega * omega));
  return stationary + k / T * r * finite_window_term(ky, omega, T);
}

double stationary_squeezing(const SourceParams& p, double omega) {
  p.validate();
  return 1.0 + 4.0 * p.kappa * stationary_spectrum(p, p.squeezed_quadrature(), omega);
}

SqueezingSpectrum input_squeezing_spectrum(const SourceParams& p, double T, const Eigen::VectorXd& omegas) {
  SqueezingSpectrum out;
  out.omega = omegas;
  out.S.resize(omegas.size());
  for (Eigen::Index i = 0; i < omegas.size(); ++i) out.S[i] = input_squeezing(p, T, omegas[i]);
  out.pulse_duration = T;
  out.quadrature = p.squeezed_quadrature();
  out.warnings = p.warnings(T);
  return out;
}

double numeric_correlator_at_zero(const SourceParams& p, Quadrature q) {
  // w = k tan(theta) maps the Lorentzian onto a smooth integrand on (-pi/2, pi/2)
  const double k = correlator_shape(p, q).rate;
  const int n = 2048;
  const double a = -std::numbers::pi / 2.0, h = std::numbers::pi / n;
  const Eigen::VectorXd w = simpson_weights(n, h);
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    // the endpoint limit is finite; sample it just inside the interval
    const double th = std::clamp(a + i * h, a + 1e-7, -a - 1e-7);
    const double c = std::cos(th);
    acc += w[i] * stationary_spectrum(p, q, k * std::tan(th)) * k / (c * c);
  }
  return acc / (2.0 * std::numbers::pi);
}

LaserYConsistency laser_y_consistency(const SourceParams& p) {
  SourceParams laser = p;
  laser.kind = SourceKind::laser;
  laser.validate();
  LaserYConsistency r;
  r.printed_amplitude = correlator_shape(laser, Quadrature::y).amplitude;
  r.transform_amplitude = numeric_correlator_at_zero(laser, Quadrature::y);
  r.ratio = r.printed_amplitude / r.transform_amplitude;
  return r;
}

}  // namespace qmem
