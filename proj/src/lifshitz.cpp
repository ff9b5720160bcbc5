#include "casimir/lifshitz.hpp"

#include <cmath>
#include <limits>

#include "casimir/constants.hpp"
#include "surface.hpp"

namespace casimir {

using constants::c;
using constants::hbar;
using constants::k_B;
using constants::pi;
using constants::zeta3;

namespace {

/// Both plates at one frequency plus the m = 0 policy override.
struct GapKernel {
  detail::Surface left;
  detail::Surface right;
  bool drop_te = false;
  double gap = 0.0;

  /// Products Delta_l Delta_r at y = 2 a kappa0.
  Reflection products(double y) const {
    const double kappa0 = y / (2.0 * gap);
    const auto l = left.at(kappa0);
    const auto r = right.at(kappa0);
    return {drop_te ? 0.0 : l.te * r.te, l.tm * r.tm};
  }
};

GapKernel kernel_at(const PlateConfig& config, double zeta) {
  GapKernel k;
  k.gap = config.gap_a;
  k.left = detail::surface_at(config.left, zeta);
  k.right = detail::surface_at(config.right, zeta);
  if (zeta == 0.0 && config.policy == ZeroModePolicy::ExcludeTE) k.drop_te = true;
  return k;
}

struct SplitIntegral {
  double te = 0.0;
  double tm = 0.0;
  double error = 0.0;
};

enum class Quantity { Pressure, FreeEnergy };

/// int_{y_lo}^{y_lo + y_max} w(y) h_q(y) dy for each polarization, with
/// w = y^2 and h = R e^{-y}/(1 - R e^{-y}) (pressure) or w = y and
/// h = ln(1 - R e^{-y}) (free energy).
SplitIntegral integrate_polarizations(const GapKernel& kernel, double y_lo, Quantity quantity,
                                      const QuadratureSettings& settings) {
  const double y_hi = y_lo + settings.y_max;
  // Panels at fixed offsets resolve the near-origin structure of the m = 0 term.
  std::vector<double> breaks{y_lo};
  for (double step : {0.5, 2.0, 8.0, 20.0})
    if (y_lo + step < y_hi) breaks.push_back(y_lo + step);
  breaks.push_back(y_hi);

  auto integrand = [&](bool te) {
    return [&kernel, te, quantity](double y) {
      const auto prod = kernel.products(y);
      const double r = te ? prod.te : prod.tm;
      if (r == 0.0) return 0.0;
      if (quantity == Quantity::Pressure) return y * y * detail::round_trip_ratio(r, y);
      return y * detail::round_trip_log(r, y);
    };
  };
  const auto te = adaptive_quad(integrand(true), std::span<const double>(breaks), settings);
  const auto tm = adaptive_quad(integrand(false), std::span<const double>(breaks), settings);
  return {te.value, tm.value, te.error + tm.error};
}

struct TermValue {
  double te = 0.0;
  double tm = 0.0;
  double error = 0.0;
};

/// Matsubara sum of a per-frequency split integral, scaled by `prefactor`.
struct SummedSplit {
  double te = 0.0;
  double tm = 0.0;
  double error = 0.0;
  std::vector<ModeContribution> per_mode;
  SumDiagnostics diagnostics;
};

SummedSplit matsubara_split(const PlateConfig& config, Quantity quantity, double prefactor) {
  const double T = config.temperature_T;
  const double zeta1 = constants::matsubara_frequency(1, T);
  const double knee = 3.0 * c / (2.0 * config.gap_a);
  SumControl control;
  control.min_stop_index = static_cast<long>(std::ceil(knee / zeta1));
  if (static_cast<double>(control.min_stop_index) * zeta1 <= knee) ++control.min_stop_index;

  auto term = [&](long m) {
    const double zeta = constants::matsubara_frequency(m, T);
    const auto kernel = kernel_at(config, zeta);
    const double y_lo = 2.0 * config.gap_a * zeta / c;
    const auto split = integrate_polarizations(kernel, y_lo, quantity, config.quad);
    return TermValue{prefactor * split.te, prefactor * split.tm, std::abs(prefactor) * split.error};
  };
  auto seq = matsubara_terms(term, [](const TermValue& t) { return t.te + t.tm; }, config.quad, control);

  SummedSplit out;
  CompensatedSum te, tm, err;
  for (std::size_t m = 0; m < seq.terms.size(); ++m) {
    const double w = m == 0 ? 0.5 : 1.0;
    const auto& t = seq.terms[m];
    te += w * t.te;
    tm += w * t.tm;
    err += w * t.error;
    out.per_mode.push_back({static_cast<long>(m), w * (t.te + t.tm)});
  }
  out.te = te.value();
  out.tm = tm.value();
  out.error = err.value() + seq.diagnostics.truncation_estimate;
  out.diagnostics = seq.diagnostics;
  return out;
}

/// T = 0: outer integral in x = 2 a zeta / c over (0, y_max], panels refined
/// geometrically toward x = 0 to resolve the Drude knee at zeta ~ gamma.
struct ZeroTemperatureSplit {
  double te = 0.0;
  double tm = 0.0;
  double error = 0.0;
};

ZeroTemperatureSplit zero_temperature_split(const PlateConfig& config, Quantity quantity, double prefactor) {
  QuadratureSettings inner = config.quad;
  inner.rel_tol = std::max(config.quad.rel_tol / 10.0, 2e-12);
  const auto breaks = geometric_breaks(config.quad.y_max, 0.1, 14);

  ZeroTemperatureSplit out;
  for (bool te : {true, false}) {
    double worst_inner = 0.0;
    auto outer = [&](double x) {
      const double zeta = x * c / (2.0 * config.gap_a);
      const auto kernel = kernel_at(config, zeta);
      QuadratureSettings s = inner;
      s.y_max = config.quad.y_max;
      // Only one polarization is needed per pass.
      const double y_hi = x + s.y_max;
      std::vector<double> ybreaks{x};
      for (double step : {0.5, 2.0, 8.0, 20.0})
        if (x + step < y_hi) ybreaks.push_back(x + step);
      ybreaks.push_back(y_hi);
      auto f = [&kernel, te, quantity](double y) {
        const auto prod = kernel.products(y);
        const double r = te ? prod.te : prod.tm;
        if (r == 0.0) return 0.0;
        if (quantity == Quantity::Pressure) return y * y * detail::round_trip_ratio(r, y);
        return y * detail::round_trip_log(r, y);
      };
      const auto q = adaptive_quad(f, std::span<const double>(ybreaks), s);
      if (q.value != 0.0) worst_inner = std::max(worst_inner, q.error / std::abs(q.value));
      return q.value;
    };
    const auto result = adaptive_quad(outer, std::span<const double>(breaks), config.quad);
    const double value = prefactor * result.value;
    const double error = std::abs(prefactor) * result.error + worst_inner * std::abs(value);
    (te ? out.te : out.tm) = value;
    out.error += error;
  }
  return out;
}

double thermal_wavenumber_gap(double gap, double temperature) { return gap * constants::thermal_wavenumber(temperature); }

}  // namespace

std::string to_string(ZeroModePolicy policy) {
  switch (policy) {
    case ZeroModePolicy::FromModel:
      return "from-model";
    case ZeroModePolicy::ForceIdealBoth:
      return "force-ideal-both";
    case ZeroModePolicy::ExcludeTE:
      return "exclude-te";
  }
  return "unknown";
}

PlateConfig PlateConfig::symmetric(DielectricModel model, double gap, double temperature, ZeroModePolicy policy,
                                   QuadratureSettings quad) {
  PlateConfig config;
  config.left = model;
  config.right = std::move(model);
  config.gap_a = gap;
  config.temperature_T = temperature;
  config.policy = policy;
  config.quad = quad;
  return config;
}

void PlateConfig::validate() const {
  if (!(gap_a > 0.0) || !std::isfinite(gap_a)) throw DomainError("gap a must be positive");
  if (!(temperature_T >= 0.0) || !std::isfinite(temperature_T)) throw DomainError("temperature must be >= 0");
  if (policy != ZeroModePolicy::FromModel && !(left.is_ideal() && right.is_ideal()))
    throw DomainError("zero-mode policy " + to_string(policy) + " requires ideal plates on both sides");
  quad.validate();
}

double kappa(double eps, double zeta, double k_perp) {
  if (!(eps >= 1.0)) throw DomainError("kappa: eps must be >= 1");
  if (!(zeta >= 0.0) || !(k_perp >= 0.0)) throw DomainError("kappa: zeta and k_perp must be non-negative");
  if (zeta == 0.0 && k_perp == 0.0) throw DomainError("kappa: zeta and k_perp cannot both vanish");
  const double q = zeta / c;
  return std::sqrt(k_perp * k_perp + eps * q * q);
}

Reflection reflection_coefficients(const DielectricModel& model, double zeta, double k_perp) {
  if (!(zeta >= 0.0) || !(k_perp >= 0.0)) throw DomainError("reflection_coefficients: negative argument");
  if (zeta == 0.0 && !(k_perp > 0.0)) throw DomainError("reflection_coefficients: k_perp must be > 0 at zeta = 0");
  const double q = zeta / c;
  const double kappa0 = std::sqrt(k_perp * k_perp + q * q);
  return detail::surface_at(model, zeta).at(kappa0);
}

double casimir_pressure_ideal(double gap) {
  if (!(gap > 0.0)) throw DomainError("gap must be positive");
  return -pi * pi * hbar * c / (240.0 * std::pow(gap, 4));
}

PressureResult pressure(const PlateConfig& config) {
  config.validate();
  const double a = config.gap_a;
  PressureResult result;
  if (config.temperature_T == 0.0) {
    const double prefactor = -hbar * c / (32.0 * pi * pi * std::pow(a, 4));
    const auto split = zero_temperature_split(config, Quantity::Pressure, prefactor);
    result.te_part = split.te;
    result.tm_part = split.tm;
    result.est_error = split.error;
  } else {
    const double prefactor = -k_B * config.temperature_T / (8.0 * pi * std::pow(a, 3));
    auto split = matsubara_split(config, Quantity::Pressure, prefactor);
    result.te_part = split.te;
    result.tm_part = split.tm;
    result.est_error = split.error;
    result.per_mode = std::move(split.per_mode);
    result.diagnostics = split.diagnostics;
  }
  result.total = result.te_part + result.tm_part;
  return result;
}

EnergyResult free_energy(const PlateConfig& config) {
  config.validate();
  const double a = config.gap_a;
  if (config.temperature_T == 0.0) {
    const double prefactor = hbar * c / (32.0 * pi * pi * std::pow(a, 3));
    const auto split = zero_temperature_split(config, Quantity::FreeEnergy, prefactor);
    return {split.te + split.tm, split.error};
  }
  const double prefactor = k_B * config.temperature_T / (8.0 * pi * a * a);
  const auto split = matsubara_split(config, Quantity::FreeEnergy, prefactor);
  return {split.te + split.tm, split.error};
}

DerivativeResult entropy(const PlateConfig& config) {
  config.validate();
  const double T = config.temperature_T;
  if (!(T > 0.0)) throw DomainError("entropy requires T > 0");
  const double step = std::min(std::max(0.01 * T, 0.1), 0.5 * T);
  double f_scale = 0.0;
  auto f_of_t = [&config, &f_scale](double temperature) {
    PlateConfig shifted = config;
    shifted.temperature_T = temperature;
    const double f = free_energy(shifted).value;
    f_scale = std::max(f_scale, std::abs(f));
    return f;
  };
  const auto d = guarded_derivative(f_of_t, T, step);
  const double noise = config.quad.rel_tol * f_scale / step;
  if (d.error > 10.0 * (noise + config.quad.rel_tol * std::abs(d.value)))
    throw ConvergenceError("entropy: finite-difference estimates disagree beyond tolerance", -d.value, d.error);
  return {-d.value, d.error};
}

ThermoResult thermodynamics(const PlateConfig& config) {
  config.validate();
  ThermoResult out;
  const auto f = free_energy(config);
  out.free_energy_F = f.value;
  out.free_energy_error = f.est_error;
  if (config.temperature_T > 0.0) {
    const auto s = entropy(config);
    out.entropy_S = s.value;
    out.entropy_error = s.error;
  } else {
    out.entropy_S = std::numeric_limits<double>::quiet_NaN();
  }
  auto f_of_a = [&config](double gap) {
    PlateConfig shifted = config;
    shifted.gap_a = gap;
    return free_energy(shifted).value;
  };
  const auto d = guarded_derivative(f_of_a, config.gap_a, 0.05 * config.gap_a);
  out.pressure_check = -d.value;
  out.pressure_check_error = d.error;
  return out;
}

MatsubaraSummand matsubara_summand_at(const PlateConfig& config, double m) {
  config.validate();
  if (!(config.temperature_T > 0.0)) throw DomainError("matsubara_summand requires T > 0");
  if (!(m >= 0.0)) throw DomainError("matsubara_summand requires m >= 0");
  const double zeta = 2.0 * pi * m * k_B * config.temperature_T / hbar;
  const auto kernel = kernel_at(config, zeta);
  const double y_lo = 2.0 * config.gap_a * zeta / c;
  const auto split = integrate_polarizations(kernel, y_lo, Quantity::Pressure, config.quad);
  const double prefactor = -k_B * config.temperature_T / (8.0 * pi * std::pow(config.gap_a, 3));
  return {prefactor * (split.te + split.tm), prefactor * split.te, std::abs(prefactor) * split.error};
}

MatsubaraSummand matsubara_summand(const PlateConfig& config, long m) {
  if (m < 0) throw DomainError("matsubara_summand requires m >= 0");
  return matsubara_summand_at(config, static_cast<double>(m));
}

TeZeroModeDiagnostic te_zero_mode_diagnostic(const PlateConfig& config) {
  config.validate();
  if (!(config.temperature_T > 0.0)) throw DomainError("te_zero_mode_diagnostic requires T > 0");
  TeZeroModeDiagnostic out;
  const double a = config.gap_a;
  const double prefactor = -k_B * config.temperature_T / (8.0 * pi * std::pow(a, 3));
  out.f_te_zero = matsubara_summand(config, 0).te;
  out.closed_form = -zeta3 * k_B * config.temperature_T / (4.0 * pi * std::pow(a, 3));

  GapKernel ideal;
  ideal.gap = a;
  out.ideal_continuation = prefactor * integrate_polarizations(ideal, 0.0, Quantity::Pressure, config.quad).te;

  auto plasma_limit = [](const DielectricModel& m) -> std::optional<detail::Surface> {
    double wp = 0.0;
    if (auto* d = std::get_if<DrudeModel>(&m.variant())) wp = d->omega_p;
    else if (auto* p = std::get_if<PlasmaModel>(&m.variant())) wp = p->omega_p;
    else if (auto* t = std::get_if<TabulatedModel>(&m.variant()); t && t->low_tail()) wp = t->low_tail()->omega_p;
    else if (m.is_ideal()) return detail::Surface{detail::Surface::Kind::Perfect, 0.0, 0.0};
    if (wp <= 0.0) return std::nullopt;
    return detail::Surface{detail::Surface::Kind::ZeroFinite, 0.0, (wp / c) * (wp / c)};
  };
  const auto l = plasma_limit(config.left);
  const auto r = plasma_limit(config.right);
  if (l && r) {
    GapKernel plasma{*l, *r, false, a};
    out.plasma_continuation = prefactor * integrate_polarizations(plasma, 0.0, Quantity::Pressure, config.quad).te;
  }
  return out;
}

EulerMaclaurinCheck euler_maclaurin_pressure(const PlateConfig& config, int k_terms) {
  config.validate();
  if (!(config.temperature_T > 0.0)) throw DomainError("euler_maclaurin_pressure requires T > 0");
  PlateConfig tight = config;
  tight.quad.rel_tol = std::min(config.quad.rel_tol, 1e-10);

  const double t = 4.0 * pi * thermal_wavenumber_gap(config.gap_a, config.temperature_T);
  auto f = [&tight](double m) { return matsubara_summand_at(tight, m).total; };

  EulerMaclaurinOptions options;
  options.upper = 1.5 * config.quad.y_max / t;
  options.derivative_step = 0.05 / std::max(1.0, t);
  options.stencil_points = 2 * k_terms + 3;
  const auto em = euler_maclaurin(f, tight.quad, k_terms, options);

  EulerMaclaurinCheck out;
  out.euler_maclaurin = em.value;
  out.integral = em.integral;
  out.corrections = em.corrections;
  out.direct_sum = pressure(tight).total;
  return out;
}

double ideal_pressure(double gap, double temperature, IdealForm form) {
  if (!(gap > 0.0)) throw DomainError("gap must be positive");
  if (!(temperature >= 0.0)) throw DomainError("temperature must be >= 0");
  const double pc = casimir_pressure_ideal(gap);
  const double at = thermal_wavenumber_gap(gap, temperature);  // a k_B T / (hbar c)
  const double t = 4.0 * pi * at;
  const double lead = -k_B * temperature / (4.0 * pi * std::pow(gap, 3));
  switch (form) {
    case IdealForm::HighTAsymptote:
      return lead * zeta3 + 2.0 * lead * (1.0 + t + 0.5 * t * t) * std::exp(-t);
    case IdealForm::LowTAsymptote: {
      if (temperature == 0.0) return pc;
      return pc * (1.0 + 16.0 / 3.0 * std::pow(at, 4) - 240.0 / pi * at * std::exp(-pi / at));
    }
    case IdealForm::ExactSum:
    default: {
      if (temperature == 0.0) return pc;
      QuadratureSettings s;
      s.rel_tol = 2e-12;
      s.matsubara_m_max = 50'000'000;
      auto term = [t, &s](long m) {
        const double lo = static_cast<double>(m) * t;
        auto bose = [](double y) { return y * y * std::exp(-y) / -std::expm1(-y); };
        const std::array<double, 4> breaks{lo, lo + 2.0, lo + 10.0, lo + s.y_max};
        return adaptive_quad(bose, std::span<const double>(breaks), s).value;
      };
      SumControl control;
      control.min_stop_index = static_cast<long>(std::ceil(3.0 / t)) + 1;
      return lead * matsubara_sum(term, s, control).value;
    }
  }
}

double ideal_free_energy_low_t(double gap, double temperature) {
  const double kt = k_B * temperature;
  return -pi * pi * hbar * c / (720.0 * std::pow(gap, 3)) - zeta3 * std::pow(kt, 3) / (2.0 * pi * hbar * hbar * c * c) +
         pi * pi * std::pow(kt, 4) * gap / (45.0 * std::pow(hbar * c, 3));
}

double ideal_entropy_low_t(double gap, double temperature) {
  const double hc = hbar * c;
  return 3.0 * zeta3 * std::pow(k_B, 3) * temperature * temperature / (2.0 * pi * hc * hc) -
         4.0 * pi * pi * std::pow(k_B, 4) * std::pow(temperature, 3) * gap / (45.0 * std::pow(hc, 3));
}

MimCorrections mim_corrections(double gap, double temperature) {
  if (!(gap > 0.0) || !(temperature > 0.0)) throw DomainError("mim_corrections requires a > 0 and T > 0");
  const double linear = zeta3 * k_B * temperature / (8.0 * pi * std::pow(gap, 3));
  return {linear, -linear, 1.0 - 30.0 * zeta3 / std::pow(pi, 3) * thermal_wavenumber_gap(gap, temperature)};
}

double drude_low_temperature_coefficient(const DrudeModel& model) {
  return k_B * k_B * model.omega_p * model.omega_p * (2.0 * std::log(2.0) - 1.0) / (48.0 * hbar * c * c * model.gamma);
}

SpherePlateForce sphere_plate_force(double radius, const PlateConfig& config, bool ideal_expansion) {
  config.validate();
  if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
  SpherePlateForce out;
  out.pfa_warning = radius < 10.0 * config.gap_a;
  if (ideal_expansion) {
    const double x = thermal_wavenumber_gap(config.gap_a, config.temperature_T);
    const double p3 = std::pow(pi, 3);
    out.force = -p3 * hbar * c * radius / (360.0 * std::pow(config.gap_a, 3)) *
                (1.0 - 45.0 * zeta3 / p3 * x + 360.0 * zeta3 / p3 * x * x * x - 16.0 * std::pow(x, 4));
  } else {
    out.force = 2.0 * pi * radius * free_energy(config).value;
  }
  return out;
}

std::vector<IntegrandSample> integrand_grid(const PlateConfig& config, const std::vector<double>& zeta_grid,
                                            const std::vector<double>& kperp_grid) {
  config.validate();
  std::vector<IntegrandSample> out;
  out.reserve(zeta_grid.size() * kperp_grid.size());
  const double a = config.gap_a;
  const double prefactor = -hbar / (2.0 * pi * pi);
  for (double zeta : zeta_grid) {
    if (!(zeta >= 0.0)) throw DomainError("integrand_grid: zeta must be >= 0");
    const auto kernel = kernel_at(config, zeta);
    const double q = zeta / c;
    for (double k : kperp_grid) {
      if (!(k >= 0.0) || (zeta == 0.0 && k == 0.0)) throw DomainError("integrand_grid: invalid k_perp");
      const double kappa0 = std::sqrt(k * k + q * q);
      const double y = 2.0 * a * kappa0;
      const auto prod = kernel.products(y);
      const double weight = prefactor * k * kappa0;
      out.push_back({zeta, k, weight * detail::round_trip_ratio(prod.te, y), weight * detail::round_trip_ratio(prod.tm, y)});
    }
  }
  return out;
}

}  // namespace casimir
