#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir {

// Permittivity models evaluated on the imaginary frequency axis, eps(i zeta).
// All frequencies are angular, in rad/s.

struct TableRow {
  double zeta;  // rad/s
  double eps;   // relative permittivity
};

struct PermittivityTable {
  std::vector<TableRow> rows;
  std::string provenance;
};

struct IdealModel {};

/// eps = 1 at every frequency; reflects nothing.
struct VacuumModel {};

struct PlasmaModel {
  double omega_p;
};

struct DrudeModel {
  double omega_p;
  double gamma;
};

/// Interpolated optical data: log(eps - 1) linear in log zeta between rows,
/// a Drude (or constant) tail below the first row and eps = 1 + C/zeta^2
/// above the last one, C matched to the last row.
class TabulatedModel {
 public:
  TabulatedModel(PermittivityTable table, std::optional<DrudeModel> low_tail);

  double eps(double zeta) const;
  double chi(double zeta) const;
  const PermittivityTable& table() const { return data_->table; }
  const std::optional<DrudeModel>& low_tail() const { return data_->low_tail; }
  double high_tail_coefficient() const { return data_->high_tail; }

 private:
  struct Data {
    PermittivityTable table;
    std::optional<DrudeModel> low_tail;
    double high_tail = 0.0;
    std::vector<double> log_zeta;
    std::vector<double> log_chi;
  };
  std::shared_ptr<const Data> data_;
};

class DielectricModel {
 public:
  using Variant = std::variant<IdealModel, VacuumModel, PlasmaModel, DrudeModel, TabulatedModel>;

  static DielectricModel ideal() { return DielectricModel(IdealModel{}); }
  static DielectricModel vacuum() { return DielectricModel(VacuumModel{}); }
  static DielectricModel plasma(double omega_p);
  static DielectricModel drude(double omega_p, double gamma);
  static DielectricModel tabulated(PermittivityTable table, std::optional<DrudeModel> low_tail = std::nullopt);

  const Variant& variant() const { return model_; }
  bool is_ideal() const { return std::holds_alternative<IdealModel>(model_); }
  bool is_vacuum() const { return std::holds_alternative<VacuumModel>(model_); }
  /// Compact description, e.g. "drude:1.3719e+16,5.2415e+13" (rad/s).
  std::string describe() const;

 private:
  explicit DielectricModel(Variant v) : model_(std::move(v)) {}
  Variant model_;
};

/// lim_{zeta->0} zeta^2 eps(i zeta)/c^2; decides whether the TE zero mode survives.
struct ZeroModeLimit {
  enum class Kind { Vanishing, Finite, Infinite };
  Kind kind = Kind::Vanishing;
  double value = 0.0;  // 1/m^2, meaningful for Finite only

  bool operator==(const ZeroModeLimit&) const = default;
};

double eps_imag(const DielectricModel& model, double zeta);

/// eps(i zeta) - 1, without the cancellation of forming it from eps_imag.
double chi_imag(const DielectricModel& model, double zeta);

ZeroModeLimit zero_mode_limit(const DielectricModel& model);

/// Z = -(zeta/c) / sqrt(zeta^2 (eps - 1)/c^2 + kappa0^2), kappa0^2 = zeta^2/c^2 + k_perp^2.
/// Returned in extended precision.
long double surface_impedance(const DielectricModel& model, double zeta, double k_perp);

/// TE reflection coefficient r = -(zeta/c + Z kappa0)/(zeta/c - Z kappa0)
/// built from a surface impedance. Equals -Delta_TE.
double te_reflection_from_impedance(long double impedance, double zeta, double k_perp);

/// k_perp-free normal-skin-effect impedance -sqrt(gamma zeta)/omega_p (Drude only).
double local_impedance(const DielectricModel& model, double zeta);

/// Drude spectral density (2/pi) gamma/(omega^2 + gamma^2), in s/rad.
double drude_spectral(double gamma, double omega);

/// Checks ordering, eps >= 1, monotonicity (1e-9 relative slack) and, when
/// `min_rows` > 0, the row count and a >= 3 decade span.
void validate_table(const PermittivityTable& table, std::size_t min_rows);

/// Parses `zeta,eps` records; `#` lines and blank lines are skipped, a
/// `# provenance: ...` line sets the provenance tag.
PermittivityTable load_table(std::istream& in);
PermittivityTable load_table_file(const std::string& path);

/// Writes the table in the load_table format with 17 significant digits.
void write_table(const PermittivityTable& table, std::ostream& out);

}  // namespace casimir
