#include "casimir/multilayer.hpp"

#include <cmath>
#include <vector>

#include "casimir/constants.hpp"
#include "surface.hpp"

namespace casimir {

using constants::c;
using constants::hbar;
using constants::k_B;
using constants::pi;

namespace {

struct Ratio {
  double te = 0.0;
  double tm = 0.0;
};

/// Wall and slab frozen at one frequency.
struct SlabKernel {
  detail::Surface wall;
  detail::Surface slab;
  double h = 0.0;
  double b = 0.0;
  double delta = 0.0;

  double numerator_over_denominator(double d1, double d2, double e2, double one_minus_e2, double a, double bexp,
                                    double scale) const {
    const double p = d1 * d2 * one_minus_e2;
    const double numer = p * (a - bexp);
    const double denom = 1.0 - d2 * d2 * e2 - d1 * d1 * (a * bexp) * (e2 - d2 * d2) - p * (a + bexp);
    // The ideal stack vanishes like (1 - A)(1 - B) as kappa0 -> 0; compare against that.
    if (!(std::abs(denom) >= 1e-12 * scale))
      throw DomainError("five-layer denominator vanishes: singular configuration");
    return numer / denom;
  }

  /// N/D for both polarizations at a given kappa0.
  Ratio at(double kappa0) const {
    const auto r1 = wall.at(kappa0);
    const auto r2 = slab.at(kappa0);
    const bool opaque = slab.kind == detail::Surface::Kind::Perfect;
    const double slab_exponent = opaque ? 0.0 : -2.0 * slab.medium_kappa(kappa0) * b;
    const double e2 = opaque ? 0.0 : std::exp(slab_exponent);
    const double one_minus_e2 = opaque ? 1.0 : -std::expm1(slab_exponent);
    // e^{-kappa0 h} sinh(2 kappa0 delta) and the cosh analog, without overflow.
    const double near = kappa0 * (h - 2.0 * delta);
    const double far = kappa0 * (h + 2.0 * delta);
    const double a = std::exp(-near);
    const double bexp = std::exp(-far);
    const double scale = std::expm1(-near) * std::expm1(-far);
    return {numerator_over_denominator(r1.te, r2.te, e2, one_minus_e2, a, bexp, scale),
            numerator_over_denominator(r1.tm, r2.tm, e2, one_minus_e2, a, bexp, scale)};
  }
};

SlabKernel kernel_at(const FiveLayerConfig& config, double zeta) {
  return {detail::surface_at(config.wall_model, zeta), detail::surface_at(config.slab_model, zeta),
          config.vacuum_h(), config.slab_b, config.offset_delta};
}

std::vector<double> y_breaks(double lo, double y_max) {
  std::vector<double> breaks{lo};
  for (double step : {0.5, 2.0, 8.0, 20.0})
    if (step < y_max) breaks.push_back(lo + step);
  breaks.push_back(lo + y_max);
  return breaks;
}

/// int y^2 (N/D) dy over [y_lo, y_lo + y_max], y = L kappa0.
QuadResult integrate_y(const SlabKernel& kernel, double length, double y_lo, bool te,
                       const QuadratureSettings& settings) {
  const auto breaks = y_breaks(y_lo, settings.y_max);
  auto f = [&kernel, length, te](double y) {
    const auto r = kernel.at(y / length);
    return y * y * (te ? r.te : r.tm);
  };
  return adaptive_quad(f, std::span<const double>(breaks), settings);
}

}  // namespace

double FiveLayerConfig::near_gap() const { return 0.5 * vacuum_h() - std::abs(offset_delta); }

void FiveLayerConfig::validate() const {
  if (!(cavity_c > 0.0) || !(slab_b > 0.0) || !(slab_b < cavity_c))
    throw DomainError("five-layer geometry requires 0 < b < c");
  if (!std::isfinite(offset_delta) || !(std::abs(offset_delta) < 0.5 * vacuum_h()))
    throw DomainError("five-layer geometry requires |delta| < (c - b)/2");
  if (!(temperature_T >= 0.0) || !std::isfinite(temperature_T)) throw DomainError("temperature must be >= 0");
  quad.validate();
}

double five_layer_integrand(const FiveLayerConfig& config, double zeta, double k_perp, Polarization q) {
  config.validate();
  if (!(zeta >= 0.0) || !(k_perp >= 0.0)) throw DomainError("five_layer_integrand: negative argument");
  if (zeta == 0.0 && !(k_perp > 0.0)) throw DomainError("five_layer_integrand: k_perp must be > 0 at zeta = 0");
  const double qz = zeta / c;
  const double kappa0 = std::sqrt(k_perp * k_perp + qz * qz);
  const auto r = kernel_at(config, zeta).at(kappa0);
  return k_perp * kappa0 * (q == Polarization::TE ? r.te : r.tm);
}

PressureResult five_layer_pressure(const FiveLayerConfig& config) {
  config.validate();
  PressureResult result;
  if (config.offset_delta == 0.0) return result;

  const double length = 2.0 * config.near_gap();
  const auto& quad = config.quad;

  if (config.temperature_T == 0.0) {
    QuadratureSettings inner = quad;
    inner.rel_tol = std::max(quad.rel_tol / 10.0, 2e-12);
    const double prefactor = hbar * c / (2.0 * pi * pi * std::pow(length, 4));
    const auto breaks = geometric_breaks(quad.y_max, 0.1, 14);
    for (bool te : {true, false}) {
      double worst_inner = 0.0;
      auto outer = [&](double x) {
        const auto kernel = kernel_at(config, x * c / length);
        const auto q = integrate_y(kernel, length, x, te, inner);
        if (q.value != 0.0) worst_inner = std::max(worst_inner, q.error / std::abs(q.value));
        return q.value;
      };
      const auto r = adaptive_quad(outer, std::span<const double>(breaks), quad);
      const double value = prefactor * r.value;
      (te ? result.te_part : result.tm_part) = value;
      result.est_error += std::abs(prefactor) * r.error + worst_inner * std::abs(value);
    }
    result.total = result.te_part + result.tm_part;
    return result;
  }

  const double T = config.temperature_T;
  const double prefactor = k_B * T / (pi * std::pow(length, 3));
  struct Term {
    double te, tm, error;
  };
  auto term = [&](long m) {
    const double zeta = constants::matsubara_frequency(m, T);
    const auto kernel = kernel_at(config, zeta);
    const double y_lo = length * zeta / c;
    const auto te = integrate_y(kernel, length, y_lo, true, quad);
    const auto tm = integrate_y(kernel, length, y_lo, false, quad);
    return Term{prefactor * te.value, prefactor * tm.value, std::abs(prefactor) * (te.error + tm.error)};
  };
  SumControl control;
  const double knee = 3.0 * c / length;
  control.min_stop_index = static_cast<long>(std::floor(knee / constants::matsubara_frequency(1, T))) + 1;
  auto seq = matsubara_terms(term, [](const Term& t) { return t.te + t.tm; }, quad, control);

  CompensatedSum te, tm, err;
  for (std::size_t m = 0; m < seq.terms.size(); ++m) {
    const double w = m == 0 ? 0.5 : 1.0;
    const auto& t = seq.terms[m];
    te += w * t.te;
    tm += w * t.tm;
    err += w * t.error;
    result.per_mode.push_back({static_cast<long>(m), w * (t.te + t.tm)});
  }
  result.te_part = te.value();
  result.tm_part = tm.value();
  result.total = result.te_part + result.tm_part;
  result.est_error = err.value() + seq.diagnostics.truncation_estimate;
  result.diagnostics = seq.diagnostics;
  return result;
}

double ideal_reference(double h, double delta) {
  if (!(h > 0.0)) throw DomainError("ideal_reference requires h > 0");
  if (!(std::abs(delta) < 0.5 * h)) throw DomainError("ideal_reference requires |delta| < h/2");
  const double far = 0.5 * h + delta;
  const double near = 0.5 * h - delta;
  return -(pi * pi * hbar * c / 240.0) * (1.0 / std::pow(far, 4) - 1.0 / std::pow(near, 4));
}

}  // namespace casimir
