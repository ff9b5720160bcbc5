#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casimir/dielectric.hpp"
#include "casimir/numerics.hpp"

namespace casimir {

/// How the m = 0 Matsubara reflection coefficients are obtained.
enum class ZeroModePolicy {
  FromModel,       // analytic zeta -> 0 limit of each plate model
  ForceIdealBoth,  // eps -> infinity before zeta -> 0: TE and TM zero modes at full strength
  ExcludeTE,       // modified ideal metal: ideal everywhere except the TE zero mode
};

std::string to_string(ZeroModePolicy policy);

/// Two half-spaces separated by a vacuum gap.
struct PlateConfig {
  DielectricModel left = DielectricModel::ideal();
  DielectricModel right = DielectricModel::ideal();
  double gap_a = 1e-6;         // m
  double temperature_T = 0.0;  // K
  ZeroModePolicy policy = ZeroModePolicy::FromModel;
  QuadratureSettings quad;

  static PlateConfig symmetric(DielectricModel model, double gap, double temperature,
                               ZeroModePolicy policy = ZeroModePolicy::FromModel, QuadratureSettings quad = {});

  void validate() const;
};

struct ModeContribution {
  long m;
  double contribution;  // Pa, including the half weight at m = 0
};

struct PressureResult {
  double total = 0.0;    // Pa, negative = attraction
  double te_part = 0.0;  // Pa
  double tm_part = 0.0;  // Pa
  std::vector<ModeContribution> per_mode;  // empty at T = 0
  double est_error = 0.0;                  // Pa
  SumDiagnostics diagnostics;              // Matsubara truncation (T > 0)
};

struct EnergyResult {
  double value = 0.0;      // J/m^2
  double est_error = 0.0;  // J/m^2
};

struct ThermoResult {
  double free_energy_F = 0.0;   // J/m^2
  double entropy_S = 0.0;       // J/(m^2 K); NaN at T = 0
  double entropy_error = 0.0;
  double pressure_check = 0.0;  // Pa, -dF/da
  double pressure_check_error = 0.0;
  double free_energy_error = 0.0;
};

/// Pair of reflection coefficients seen from the vacuum gap.
struct Reflection {
  double te = 0.0;
  double tm = 0.0;
};

/// sqrt(k_perp^2 + eps zeta^2/c^2), in 1/m.
double kappa(double eps, double zeta, double k_perp);

/// Delta_TE = (kappa - kappa0)/(kappa + kappa0), Delta_TM = (kappa - eps kappa0)/(kappa + eps kappa0).
/// zeta = 0 uses zero_mode_limit; the Ideal model gives (+1, -1).
Reflection reflection_coefficients(const DielectricModel& model, double zeta, double k_perp);

/// -pi^2 hbar c / (240 a^4), Pa.
double casimir_pressure_ideal(double gap);

PressureResult pressure(const PlateConfig& config);

EnergyResult free_energy(const PlateConfig& config);

/// S = -dF/dT by guarded central differences; requires T > 0.
DerivativeResult entropy(const PlateConfig& config);

/// Free energy, entropy (T > 0) and the -dF/da pressure check.
ThermoResult thermodynamics(const PlateConfig& config);

struct MatsubaraSummand {
  double total = 0.0;  // Pa, full weight
  double te = 0.0;     // Pa
  double error = 0.0;
};

/// m-th term of the finite-temperature pressure sum (no half weight at m = 0).
MatsubaraSummand matsubara_summand(const PlateConfig& config, long m);

/// Same summand at a continuous index m >= 0 (zeta = 2 pi m k_B T / hbar).
MatsubaraSummand matsubara_summand_at(const PlateConfig& config, double m);

/// TE summand at m = 0 from the plate models, compared with its zeta -> 0
/// continuation from the m > 0 (ideal-reflection) form.
struct TeZeroModeDiagnostic {
  double f_te_zero = 0.0;            // Pa
  double ideal_continuation = 0.0;   // Pa, quadrature of the ideal TE summand at zeta = 0
  double closed_form = 0.0;          // -zeta(3) k_B T / (4 pi a^3)
  std::optional<double> plasma_continuation;  // Pa, finite-omega_p limit when the models carry one
};
TeZeroModeDiagnostic te_zero_mode_diagnostic(const PlateConfig& config);

/// Euler-Maclaurin reconstruction of the pressure sum versus the direct sum.
struct EulerMaclaurinCheck {
  double euler_maclaurin = 0.0;
  double direct_sum = 0.0;
  double integral = 0.0;
  std::vector<double> corrections;
};
EulerMaclaurinCheck euler_maclaurin_pressure(const PlateConfig& config, int k_terms);

enum class IdealForm { ExactSum, HighTAsymptote, LowTAsymptote };

/// Perfect conductors at temperature T.
double ideal_pressure(double gap, double temperature, IdealForm form);

/// -pi^2 hbar c/(720 a^3) - zeta(3)(k_B T)^3/(2 pi hbar^2 c^2) + pi^2 (k_B T)^4 a/(45 hbar^3 c^3)
double ideal_free_energy_low_t(double gap, double temperature);

/// 3 zeta(3) k_B^3 T^2/(2 pi hbar^2 c^2) - 4 pi^2 k_B^4 T^3 a/(45 hbar^3 c^3)
double ideal_entropy_low_t(double gap, double temperature);

struct MimCorrections {
  double linear_pressure_term = 0.0;  // +zeta(3) k_B T/(8 pi a^3)
  double high_T_pressure = 0.0;       // -zeta(3) k_B T/(8 pi a^3)
  double ratio_to_PC = 0.0;           // 1 - 30 zeta(3)/pi^3 * a k_B T/(hbar c)
};
MimCorrections mim_corrections(double gap, double temperature);

/// Low-temperature Drude free-energy coefficient c2 in F = F0 + c2 T^2:
/// k_B^2 omega_p^2 (2 ln 2 - 1) / (48 hbar c^2 gamma), J/(m^2 K^2).
double drude_low_temperature_coefficient(const DrudeModel& model);

struct SpherePlateForce {
  double force = 0.0;  // N, negative = attraction
  bool pfa_warning = false;  // R < 10 a
};

/// Proximity-force approximation 2 pi R F(a). With `ideal_expansion` the
/// closed low-temperature series for modified ideal metals is returned.
SpherePlateForce sphere_plate_force(double radius, const PlateConfig& config, bool ideal_expansion = false);

struct IntegrandSample {
  double zeta = 0.0;
  double k_perp = 0.0;
  double te = 0.0;  // Pa s m  (integrand of the T = 0 double integral over zeta and k_perp)
  double tm = 0.0;
};

/// Pointwise T = 0 integrand, P = int dzeta int dk_perp (I_TE + I_TM); rows in
/// zeta-major order.
std::vector<IntegrandSample> integrand_grid(const PlateConfig& config, const std::vector<double>& zeta_grid,
                                            const std::vector<double>& kperp_grid);

}  // namespace casimir
