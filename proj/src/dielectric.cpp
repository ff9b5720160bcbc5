#include "casimir/dielectric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "casimir/constants.hpp"

namespace casimir {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive and finite");
}

double drude_chi(const DrudeModel& d, double zeta) { return d.omega_p * d.omega_p / (zeta * (zeta + d.gamma)); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

TabulatedModel::TabulatedModel(PermittivityTable table, std::optional<DrudeModel> low_tail) {
  if (table.rows.size() < 2) throw TableError("tabulated model needs at least 2 rows");
  validate_table(table, 0);
  if (low_tail) {
    require_positive(low_tail->omega_p, "drude-tail omega_p");
    require_positive(low_tail->gamma, "drude-tail gamma");
  }
  auto data = std::make_shared<Data>();
  for (const auto& r : table.rows) {
    data->log_zeta.push_back(std::log(r.zeta));
    data->log_chi.push_back(r.eps > 1.0 ? std::log(r.eps - 1.0) : -std::numeric_limits<double>::infinity());
  }
  const auto& last = table.rows.back();
  data->high_tail = (last.eps - 1.0) * last.zeta * last.zeta;
  data->table = std::move(table);
  data->low_tail = low_tail;
  data_ = std::move(data);
}

double TabulatedModel::eps(double zeta) const { return 1.0 + chi(zeta); }

double TabulatedModel::chi(double zeta) const {
  const auto& rows = data_->table.rows;
  if (zeta < rows.front().zeta) {
    if (data_->low_tail) return drude_chi(*data_->low_tail, zeta);
    return rows.front().eps - 1.0;
  }
  if (zeta > rows.back().zeta) return data_->high_tail / (zeta * zeta);

  const double lz = std::log(zeta);
  const auto& xs = data_->log_zeta;
  auto it = std::upper_bound(xs.begin(), xs.end(), lz);
  std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  if (hi >= xs.size()) hi = xs.size() - 1;
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double t = (lz - xs[lo]) / (xs[hi] - xs[lo]);
  const double c0 = data_->log_chi[lo], c1 = data_->log_chi[hi];
  if (std::isinf(c0) || std::isinf(c1)) {
    // eps == 1 at a node: fall back to linear interpolation of chi.
    const double chi0 = rows[lo].eps - 1.0, chi1 = rows[hi].eps - 1.0;
    return chi0 + t * (chi1 - chi0);
  }
  return std::exp(c0 + t * (c1 - c0));
}

DielectricModel DielectricModel::plasma(double omega_p) {
  require_positive(omega_p, "plasma frequency");
  return DielectricModel(PlasmaModel{omega_p});
}

DielectricModel DielectricModel::drude(double omega_p, double gamma) {
  require_positive(omega_p, "plasma frequency");
  require_positive(gamma, "relaxation frequency");
  return DielectricModel(DrudeModel{omega_p, gamma});
}

DielectricModel DielectricModel::tabulated(PermittivityTable table, std::optional<DrudeModel> low_tail) {
  return DielectricModel(TabulatedModel(std::move(table), low_tail));
}

std::string DielectricModel::describe() const {
  return std::visit(overloaded{
                        [](const IdealModel&) { return std::string("ideal"); },
                        [](const VacuumModel&) { return std::string("vacuum"); },
                        [](const PlasmaModel& p) { return "plasma:" + format17(p.omega_p); },
                        [](const DrudeModel& d) { return "drude:" + format17(d.omega_p) + "," + format17(d.gamma); },
                        [](const TabulatedModel& t) {
                          std::string s = "table:" + (t.table().provenance.empty() ? std::string("unnamed") : t.table().provenance) +
                                          "[" + std::to_string(t.table().rows.size()) + " rows]";
                          if (t.low_tail()) s += ",drude-tail:" + format17(t.low_tail()->omega_p) + "," + format17(t.low_tail()->gamma);
                          return s;
                        },
                    },
                    model_);
}

double chi_imag(const DielectricModel& model, double zeta) {
  if (!(zeta > 0.0)) throw DomainError("permittivity requires zeta > 0");
  return std::visit(overloaded{
                        [](const IdealModel&) -> double { throw DomainError("ideal model has infinite permittivity"); },
                        [](const VacuumModel&) { return 0.0; },
                        [zeta](const PlasmaModel& p) { return (p.omega_p / zeta) * (p.omega_p / zeta); },
                        [zeta](const DrudeModel& d) { return drude_chi(d, zeta); },
                        [zeta](const TabulatedModel& t) { return t.chi(zeta); },
                    },
                    model.variant());
}

double eps_imag(const DielectricModel& model, double zeta) { return 1.0 + chi_imag(model, zeta); }

ZeroModeLimit zero_mode_limit(const DielectricModel& model) {
  using Kind = ZeroModeLimit::Kind;
  return std::visit(overloaded{
                        [](const IdealModel&) { return ZeroModeLimit{Kind::Infinite, 0.0}; },
                        [](const VacuumModel&) { return ZeroModeLimit{Kind::Vanishing, 0.0}; },
                        [](const PlasmaModel& p) {
                          const double k = p.omega_p / constants::c;
                          return ZeroModeLimit{Kind::Finite, k * k};
                        },
                        [](const DrudeModel&) { return ZeroModeLimit{Kind::Vanishing, 0.0}; },
                        [](const TabulatedModel&) { return ZeroModeLimit{Kind::Vanishing, 0.0}; },
                    },
                    model.variant());
}

long double surface_impedance(const DielectricModel& model, double zeta, double k_perp) {
  if (model.is_ideal()) throw UnsupportedModel("surface impedance of an ideal conductor is identically zero");
  if (!(k_perp >= 0.0)) throw DomainError("k_perp must be non-negative");
  const long double chi = chi_imag(model, zeta);
  const long double q = static_cast<long double>(zeta) / constants::c;
  const long double k = k_perp;
  return -q / std::sqrt(q * q * chi + (q * q + k * k));
}

double te_reflection_from_impedance(long double impedance, double zeta, double k_perp) {
  const long double q = static_cast<long double>(zeta) / constants::c;
  const long double k = k_perp;
  const long double kappa0 = std::sqrt(q * q + k * k);
  return static_cast<double>(-(q + impedance * kappa0) / (q - impedance * kappa0));
}

double local_impedance(const DielectricModel& model, double zeta) {
  const auto* d = std::get_if<DrudeModel>(&model.variant());
  if (!d) throw UnsupportedModel("local (normal skin effect) impedance is defined for the Drude model only");
  if (!(zeta > 0.0)) throw DomainError("local_impedance requires zeta > 0");
  return -std::sqrt(d->gamma * zeta) / d->omega_p;
}

double drude_spectral(double gamma, double omega) {
  if (!(gamma > 0.0)) throw DomainError("drude_spectral requires gamma > 0");
  if (!(omega >= 0.0)) throw DomainError("drude_spectral requires omega >= 0");
  return (2.0 / constants::pi) * gamma / (omega * omega + gamma * gamma);
}

void validate_table(const PermittivityTable& table, std::size_t min_rows) {
  const auto& rows = table.rows;
  if (min_rows > 0 && rows.size() < min_rows)
    throw TableError("fewer than " + std::to_string(min_rows) + " rows (" + std::to_string(rows.size()) + ")");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!(r.zeta > 0.0) || !std::isfinite(r.zeta)) throw TableError("zeta must be positive and finite", static_cast<long>(i + 1));
    if (!(r.eps >= 1.0) || !std::isfinite(r.eps)) throw TableError("eps < 1 at row " + std::to_string(i + 1));
    if (i > 0) {
      if (!(r.zeta > rows[i - 1].zeta)) throw TableError("zeta not strictly ascending at row " + std::to_string(i + 1));
      if (r.eps > rows[i - 1].eps * (1.0 + 1e-9))
        throw TableError("eps increasing with zeta at row " + std::to_string(i + 1));
    }
  }
  if (min_rows > 0 && rows.back().zeta < 1e3 * rows.front().zeta)
    throw TableError("table spans fewer than 3 decades of zeta");
}

PermittivityTable load_table(std::istream& in) {
  PermittivityTable table;
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      auto body = trim(text.substr(1));
      constexpr std::string_view key = "provenance:";
      if (body.starts_with(key)) table.provenance = std::string(trim(body.substr(key.size())));
      continue;
    }
    const auto comma = text.find(',');
    TableRow row{};
    if (comma == std::string_view::npos || !parse_double(text.substr(0, comma), row.zeta) ||
        !parse_double(text.substr(comma + 1), row.eps))
      throw TableError("malformed record '" + std::string(text) + "' (expected zeta_rad_per_s,eps_relative)", number);
    table.rows.push_back(row);
  }
  validate_table(table, 8);
  return table;
}

PermittivityTable load_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableError("cannot open permittivity table '" + path + "'");
  auto table = load_table(in);
  if (table.provenance.empty()) table.provenance = path;
  return table;
}

void write_table(const PermittivityTable& table, std::ostream& out) {
  if (!table.provenance.empty()) out << "# provenance: " << table.provenance << '\n';
  out << "# zeta_rad_per_s,eps_relative\n";
  for (const auto& r : table.rows) out << format17(r.zeta) << ',' << format17(r.eps) << '\n';
}

}  // namespace casimir
