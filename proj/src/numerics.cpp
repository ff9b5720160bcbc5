#include "casimir/numerics.hpp"

#include <string>

namespace casimir {

void QuadratureSettings::validate() const {
  if (!(rel_tol > 1e-12 && rel_tol <= 1e-1))
    throw DomainError("rel_tol must lie in (1e-12, 1e-1], got " + std::to_string(rel_tol));
  if (!(y_max >= 30.0)) throw DomainError("y_max must be >= 30, got " + std::to_string(y_max));
  if (abs_floor < 0.0) throw DomainError("abs_floor must be non-negative");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be positive");
  if (matsubara_m_max < 1) throw DomainError("matsubara_m_max must be positive");
  if (workers < 1) throw DomainError("workers must be >= 1");
}

std::vector<double> geometric_breaks(double hi, double ratio, int levels) {
  if (!(hi > 0.0) || !(ratio > 0.0 && ratio < 1.0) || levels < 1)
    throw DomainError("geometric_breaks: need hi > 0, 0 < ratio < 1, levels >= 1");
  std::vector<double> breaks{0.0};
  for (int i = levels - 1; i >= 1; --i) breaks.push_back(hi * std::pow(ratio, i));
  breaks.push_back(hi);
  return breaks;
}

std::vector<double> forward_derivative_weights(int order, int points) {
  if (order < 1 || points < order + 1) throw DomainError("forward_derivative_weights: need points > order >= 1");
  const int n = points;
  // ln(1 + x) = x - x^2/2 + x^3/3 - ...
  std::vector<double> log_series(static_cast<std::size_t>(n), 0.0);
  for (int j = 1; j < n; ++j) log_series[j] = (j % 2 == 1 ? 1.0 : -1.0) / j;
  std::vector<double> power(static_cast<std::size_t>(n), 0.0);
  power[0] = 1.0;
  for (int p = 0; p < order; ++p) {
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 1; i + j < n; ++j) next[i + j] += power[i] * log_series[j];
    power = std::move(next);
  }
  // Delta^j f(0) = sum_i (-1)^(j-i) C(j, i) f(i h)
  std::vector<double> weights(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    if (power[j] == 0.0) continue;
    double binom = 1.0;
    for (int i = 0; i <= j; ++i) {
      if (i > 0) binom = binom * (j - i + 1) / i;
      weights[i] += power[j] * ((j - i) % 2 == 0 ? 1.0 : -1.0) * binom;
    }
  }
  return weights;
}

EulerMaclaurinResult euler_maclaurin(const std::function<double(double)>& f, const QuadratureSettings& settings,
                                     int k_terms, const EulerMaclaurinOptions& options) {
  if (k_terms < 0 || k_terms > static_cast<int>(kBernoulliEven.size()))
    throw DomainError("euler_maclaurin: k_terms must be in [0, 4]");
  EulerMaclaurinResult out;

  QuadResult integral;
  if (std::isinf(options.upper)) {
    auto mapped = [&f](double u) {
      const double one_minus = 1.0 - u;
      return f(u / one_minus) / (one_minus * one_minus);
    };
    const std::array<double, 6> breaks{0.0, 0.25, 0.5, 0.75, 0.9, 1.0};
    integral = adaptive_quad(mapped, std::span<const double>(breaks), settings);
  } else {
    integral = adaptive_quad(f, 0.0, options.upper, settings);
  }
  out.integral = integral.value;
  out.integral_error = integral.error;

  const int points = options.stencil_points > 0 ? options.stencil_points : 2 * k_terms + 4;
  std::vector<double> samples;
  if (options.odd_derivatives.size() < static_cast<std::size_t>(k_terms)) {
    const double h = options.derivative_step;
    if (!(h > 0.0)) throw DomainError("euler_maclaurin: derivative_step must be positive");
    for (int i = 0; i < points; ++i) samples.push_back(f(i * h));
  }

  double factorial = 1.0;  // (2k)!
  CompensatedSum total;
  total += out.integral;
  for (int k = 1; k <= k_terms; ++k) {
    factorial *= (2.0 * k - 1.0) * (2.0 * k);
    const int order = 2 * k - 1;
    double derivative;
    if (static_cast<std::size_t>(k) <= options.odd_derivatives.size()) {
      derivative = options.odd_derivatives[k - 1];
    } else {
      const auto w = forward_derivative_weights(order, std::max(points, order + 2));
      CompensatedSum acc;
      for (std::size_t i = 0; i < w.size() && i < samples.size(); ++i) acc += w[i] * samples[i];
      derivative = acc.value() / std::pow(options.derivative_step, order);
    }
    const double correction = -kBernoulliEven[k - 1] / factorial * derivative;
    out.corrections.push_back(correction);
    total += correction;
  }
  out.value = total.value();
  return out;
}

DerivativeResult guarded_derivative(const std::function<double(double)>& g, double x, double scale) {
  if (!(scale > 0.0)) throw DomainError("guarded_derivative: scale must be positive");
  constexpr int kLevels = 7;  // scale, scale/2, ..., scale/64
  std::array<std::array<double, kLevels>, kLevels> table{};
  auto central = [&](double h) {
    const double up = g(x + h);
    const double down = g(x - h);
    if (!std::isfinite(up) || !std::isfinite(down))
      throw DomainError("guarded_derivative: non-finite function value near x = " + std::to_string(x));
    return (up - down) / (2.0 * h);
  };

  double h = scale;
  table[0][0] = central(h);
  DerivativeResult best{table[0][0], std::numeric_limits<double>::infinity()};
  for (int i = 1; i < kLevels; ++i) {
    h *= 0.5;
    table[0][i] = central(h);
    double factor = 4.0;
    for (int j = 1; j <= i; ++j) {
      table[j][i] = (factor * table[j - 1][i] - table[j - 1][i - 1]) / (factor - 1.0);
      factor *= 4.0;
      const double err = std::max(std::abs(table[j][i] - table[j - 1][i]), std::abs(table[j][i] - table[j - 1][i - 1]));
      if (err <= best.error) best = {table[j][i], err};
    }
    // Higher orders stopped helping: roundoff dominates from here on.
    if (std::abs(table[i][i] - table[i - 1][i - 1]) >= 2.0 * best.error) break;
  }
  return best;
}

}  // namespace casimir
