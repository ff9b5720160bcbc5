#include "casimir/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <utility>

#include "casimir/constants.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/multilayer.hpp"

#ifndef CASIMIR_VERSION
#define CASIMIR_VERSION "0.0.0"
#endif

namespace casimir::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

/// Leading floating-point number and the unit text that follows it.
std::pair<double, std::string_view> split_quantity(std::string_view text, const char* what) {
  text = trim(text);
  std::string_view digits = text;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || !std::isfinite(value))
    throw DomainError(std::string("cannot parse ") + what + " '" + std::string(text) + "'");
  return {value, trim(std::string_view(ptr, static_cast<std::size_t>(digits.data() + digits.size() - ptr)))};
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string resolve_table_path(std::string_view path, std::string_view table_dirs) {
  namespace fs = std::filesystem;
  const fs::path given{std::string(path)};
  if (given.is_absolute() || fs::exists(given) || table_dirs.empty()) return given.string();
  for (auto dir : split(table_dirs, ':')) {
    if (dir.empty()) continue;
    const auto candidate = fs::path(std::string(dir)) / given;
    if (fs::exists(candidate)) return candidate.string();
  }
  return given.string();
}

QuadratureSettings settings_from(double rel_tol, int threads) {
  QuadratureSettings s;
  s.rel_tol = rel_tol;
  s.workers = std::max(1, threads);
  s.validate();
  return s;
}

ZeroModePolicy parse_policy(const std::string& name) {
  if (name == "from-model") return ZeroModePolicy::FromModel;
  if (name == "force-ideal-both") return ZeroModePolicy::ForceIdealBoth;
  if (name == "exclude-te") return ZeroModePolicy::ExcludeTE;
  throw DomainError("unknown policy '" + name + "' (from-model | force-ideal-both | exclude-te)");
}

std::vector<double> grid(double from, double to, int points, bool logarithmic) {
  if (points < 2) throw DomainError("grid needs at least 2 points");
  if (!(from < to)) throw DomainError("grid needs from < to");
  if (logarithmic && !(from > 0.0)) throw DomainError("logarithmic grid needs from > 0");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    g[static_cast<std::size_t>(i)] =
        logarithmic ? std::exp(std::log(from) + t * (std::log(to) - std::log(from))) : from + t * (to - from);
  }
  g.back() = to;
  return g;
}

std::string quote_arg(const std::string& arg) {
  if (!arg.empty() && arg.find_first_of(" \t'\"\\") == std::string::npos) return arg;
  std::string q = "'";
  for (char ch : arg) q += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return q + "'";
}

/// Inverse of quote_arg joined by spaces.
std::vector<std::string> unquote_line(std::string_view line) {
  std::vector<std::string> args;
  std::string current;
  bool in_arg = false, in_quote = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quote) {
      if (ch == '\'') in_quote = false;
      else current += ch;
    } else if (ch == '\'') {
      in_quote = in_arg = true;
    } else if (ch == '\\' && i + 1 < line.size()) {
      current += line[++i];
      in_arg = true;
    } else if (ch == ' ' || ch == '\t') {
      if (in_arg) args.push_back(std::move(current));
      current.clear();
      in_arg = false;
    } else {
      current += ch;
      in_arg = true;
    }
  }
  if (in_arg) args.push_back(std::move(current));
  return args;
}

/// Arguments that reproduce the run, minus output redirection.
std::string canonical_command_line(const std::vector<std::string>& args) {
  std::string line;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].starts_with("--out=")) continue;
    if (!line.empty()) line += ' ';
    line += quote_arg(args[i]);
  }
  return line;
}

using Manifest = std::vector<std::pair<std::string, std::string>>;

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const Manifest& manifest) {
    for (const auto& [key, value] : manifest) out_ << "# " << key << '=' << value << '\n';
  }
  void columns(std::initializer_list<const char*> names) {
    bool first = true;
    for (const char* n : names) {
      out_ << (first ? "" : ",") << n;
      first = false;
    }
    out_ << '\n';
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << format_number(v);
      first = false;
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Common {
  std::string model = "ideal";
  std::string right_model;
  std::string policy = "from-model";
  double rel_tol = 1e-5;
  int threads = 1;
  std::string out;
  bool deterministic = false;
};

void add_common(CLI::App* sub, Common& common, bool with_policy) {
  sub->add_option("--model", common.model, "ideal | vacuum | plasma:<wp> | drude:<wp>,<gamma> | table:<path>[,drude-tail:<wp>,<gamma>]")
      ->capture_default_str();
  if (with_policy) {
    sub->add_option("--right-model", common.right_model, "Model of the second plate (defaults to --model)");
    sub->add_option("--policy", common.policy, "Zero-mode policy: from-model | force-ideal-both | exclude-te")
        ->capture_default_str();
  }
  sub->add_option("--rel-tol", common.rel_tol, "Relative tolerance of integrals and sums")->capture_default_str();
  sub->add_option("--threads", common.threads, "Threads for Matsubara terms (results do not depend on it)")
      ->capture_default_str();
  sub->add_option("--out", common.out, "Write CSV to this file instead of stdout");
  sub->add_flag("--deterministic", common.deterministic, "Omit the timestamp header");
}

class Session {
 public:
  Session(const std::vector<std::string>& args, const Common& common, std::string command)
      : common_(common), command_(std::move(command)), command_line_(canonical_command_line(args)) {
    table_dirs_ = [] {
      const char* env = std::getenv("CASIMIR_TABLE_DIR");
      return env ? std::string(env) : std::string();
    }();
    quad_ = settings_from(common.rel_tol, common.threads);
  }

  DielectricModel model(const std::string& spec) const { return parse_model(spec, table_dirs_); }
  const QuadratureSettings& quad() const { return quad_; }

  Manifest manifest() const {
    Manifest m{{"tool", std::string("casimir ") + CASIMIR_VERSION},
               {"command", command_},
               {"command_line", command_line_},
               {"constants", constants::version_tag}};
    return m;
  }

  void append_settings(Manifest& m) const {
    m.emplace_back("rel_tol", format_number(quad_.rel_tol));
    m.emplace_back("abs_floor", format_number(quad_.abs_floor));
    m.emplace_back("max_subdivisions", std::to_string(quad_.max_subdivisions));
    m.emplace_back("y_max", format_number(quad_.y_max));
    m.emplace_back("matsubara_m_max", std::to_string(quad_.matsubara_m_max));
    if (!common_.deterministic) m.emplace_back("timestamp", utc_timestamp());
  }

  /// Runs `body` into a buffer; nothing reaches stdout or the --out file if it throws.
  void emit(std::ostream& fallback, const std::function<void(std::ostream&)>& body) const {
    std::ostringstream buffer;
    body(buffer);
    if (common_.out.empty()) {
      fallback << buffer.str();
      return;
    }
    std::ofstream file(common_.out, std::ios::binary);
    if (!file) throw DomainError("cannot open output file '" + common_.out + "'");
    file << buffer.str();
  }

 private:
  Common common_;
  std::string command_;
  std::string command_line_;
  std::string table_dirs_;
  QuadratureSettings quad_;
};

PlateConfig plate_config(const Session& session, const Common& common, double gap, double temperature) {
  PlateConfig config;
  config.left = session.model(common.model);
  config.right = common.right_model.empty() ? config.left : session.model(common.right_model);
  config.gap_a = gap;
  config.temperature_T = temperature;
  config.policy = parse_policy(common.policy);
  config.quad = session.quad();
  config.validate();
  return config;
}

void append_plate_manifest(Manifest& m, const PlateConfig& config) {
  m.emplace_back("model_left", config.left.describe());
  m.emplace_back("model_right", config.right.describe());
  m.emplace_back("policy", to_string(config.policy));
}

void pressure_row(CsvWriter& csv, const PlateConfig& config) {
  const auto r = pressure(config);
  csv.row({config.gap_a, config.temperature_T, r.total, r.total / casimir_pressure_ideal(config.gap_a), r.te_part,
           r.tm_part, r.est_error});
}

constexpr std::initializer_list<const char*> kPressureColumns = {"a_m", "T_K", "P_Pa", "P_over_PC",
                                                                 "P_TE_Pa", "P_TM_Pa", "est_error_Pa"};

std::vector<double> parse_list(const std::string& text, double (*parse)(std::string_view)) {
  std::vector<double> values;
  for (auto part : split(text, ',')) values.push_back(parse(part));
  return values;
}

}  // namespace

double parse_length(std::string_view text) {
  const auto [value, unit] = split_quantity(text, "length");
  double divisor;
  if (unit.empty() || unit == "m") divisor = 1.0;
  else if (unit == "mm") divisor = 1e3;
  else if (unit == "um" || unit == "\xC2\xB5m" || unit == "\xCE\xBCm") divisor = 1e6;
  else if (unit == "nm") divisor = 1e9;
  else throw DomainError("unknown length unit '" + std::string(unit) + "' (m, mm, um, nm)");
  return value / divisor;
}

double parse_temperature(std::string_view text) {
  const auto [value, unit] = split_quantity(text, "temperature");
  if (!unit.empty() && unit != "K") throw DomainError("temperature must be in kelvin, got '" + std::string(text) + "'");
  if (value < 0.0) throw DomainError("temperature must be >= 0");
  return value;
}

double parse_frequency(std::string_view text) {
  const auto [value, unit] = split_quantity(text, "frequency");
  if (unit.empty() || unit == "rad/s") return value;
  if (unit == "eV") return constants::ev_to_rad_per_s(value);
  throw DomainError("unknown frequency unit '" + std::string(unit) + "' (eV, rad/s)");
}

DielectricModel parse_model(std::string_view spec, std::string_view table_dirs) {
  spec = trim(spec);
  const auto colon = spec.find(':');
  const auto kind = spec.substr(0, colon);
  const auto body = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (kind == "ideal" && colon == std::string_view::npos) return DielectricModel::ideal();
  if (kind == "vacuum" && colon == std::string_view::npos) return DielectricModel::vacuum();
  if (kind == "plasma" && !body.empty()) return DielectricModel::plasma(parse_frequency(body));
  if (kind == "drude") {
    const auto parts = split(body, ',');
    if (parts.size() == 2) return DielectricModel::drude(parse_frequency(parts[0]), parse_frequency(parts[1]));
  }
  if (kind == "table" && !body.empty()) {
    constexpr std::string_view tail_key = ",drude-tail:";
    const auto tail_pos = body.find(tail_key);
    const auto path = body.substr(0, tail_pos);
    std::optional<DrudeModel> tail;
    if (tail_pos != std::string_view::npos) {
      const auto parts = split(body.substr(tail_pos + tail_key.size()), ',');
      if (parts.size() != 2) throw DomainError("drude-tail needs <wp>,<gamma>");
      tail = DrudeModel{parse_frequency(parts[0]), parse_frequency(parts[1])};
    }
    return DielectricModel::tabulated(load_table_file(resolve_table_path(path, table_dirs)), tail);
  }
  throw DomainError("cannot parse model '" + std::string(spec) +
                    "' (ideal | vacuum | plasma:<wp> | drude:<wp>,<gamma> | table:<path>[,drude-tail:<wp>,<gamma>])");
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Casimir pressure, free energy and entropy between plates and in a five-layer cavity", "casimir"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("casimir ") + CASIMIR_VERSION);

  Common common;
  std::string a_text = "1um", T_text = "0";

  auto* cmd_pressure = app.add_subcommand("pressure", "Pressure between two half-spaces");
  add_common(cmd_pressure, common, true);
  cmd_pressure->add_option("--a", a_text, "Gap width")->capture_default_str();
  cmd_pressure->add_option("--T", T_text, "Temperature")->capture_default_str();

  std::string var, from_text, to_text;
  int points = 11;
  bool log_grid = false;
  std::string cavity_text = "3um", slab_text = "500nm", wall_model, slab_model;
  auto* cmd_sweep = app.add_subcommand("sweep", "Pressure on a grid of gap, temperature or slab offset");
  add_common(cmd_sweep, common, true);
  cmd_sweep->add_option("--var", var, "Swept variable")->required()->check(CLI::IsMember({"a", "T", "delta"}));
  cmd_sweep->add_option("--from", from_text, "First grid value (with unit)")->required();
  cmd_sweep->add_option("--to", to_text, "Last grid value (with unit)")->required();
  cmd_sweep->add_option("--points", points, "Grid points")->capture_default_str();
  cmd_sweep->add_flag("--log", log_grid, "Logarithmic grid");
  cmd_sweep->add_option("--a", a_text, "Gap width when not swept")->capture_default_str();
  cmd_sweep->add_option("--T", T_text, "Temperature when not swept")->capture_default_str();
  cmd_sweep->add_option("--cavity", cavity_text, "Cavity width c for delta sweeps")->capture_default_str();
  cmd_sweep->add_option("--slab", slab_text, "Slab width b for delta sweeps")->capture_default_str();
  cmd_sweep->add_option("--wall-model", wall_model, "Wall model for delta sweeps (defaults to --model)");
  cmd_sweep->add_option("--slab-model", slab_model, "Slab model for delta sweeps (defaults to --model)");

  std::string zeta_min = "1e12", zeta_max = "1e17", kperp_min = "1e4", kperp_max = "1e9";
  int zeta_points = 50, kperp_points = 50;
  bool linear_grid = false;
  auto* cmd_integrand = app.add_subcommand("integrand", "Dump the zero-temperature integrand on a (zeta, k_perp) grid");
  add_common(cmd_integrand, common, true);
  cmd_integrand->add_option("--a", a_text, "Gap width")->capture_default_str();
  cmd_integrand->add_option("--zeta-min", zeta_min, "Smallest imaginary frequency")->capture_default_str();
  cmd_integrand->add_option("--zeta-max", zeta_max, "Largest imaginary frequency")->capture_default_str();
  cmd_integrand->add_option("--zeta-points", zeta_points)->capture_default_str();
  cmd_integrand->add_option("--kperp-min", kperp_min, "Smallest k_perp in 1/m")->capture_default_str();
  cmd_integrand->add_option("--kperp-max", kperp_max, "Largest k_perp in 1/m")->capture_default_str();
  cmd_integrand->add_option("--kperp-points", kperp_points)->capture_default_str();
  cmd_integrand->add_flag("--linear", linear_grid, "Linear instead of logarithmic grids");

  std::string delta_text;
  int delta_sweep = 0;
  auto* cmd_slab = app.add_subcommand("slab", "Pressure on a slab inside a cavity");
  add_common(cmd_slab, common, false);
  cmd_slab->add_option("--cavity", cavity_text, "Cavity width c")->capture_default_str();
  cmd_slab->add_option("--slab", slab_text, "Slab width b")->capture_default_str();
  auto* delta_opt = cmd_slab->add_option("--delta", delta_text, "Slab offset from the cavity midline");
  auto* sweep_opt =
      cmd_slab->add_option("--delta-sweep", delta_sweep, "Points from delta = 0 to (c - b)/2 - 50 nm")->check(CLI::Range(2, 100000));
  delta_opt->excludes(sweep_opt);
  cmd_slab->add_option("--T", T_text, "Temperature")->capture_default_str();
  cmd_slab->add_option("--wall-model", wall_model, "Wall model (defaults to --model)");
  cmd_slab->add_option("--slab-model", slab_model, "Slab model (defaults to --model)");

  std::string a_list = "1um", T_list = "300K";
  auto* cmd_thermo = app.add_subcommand("thermo", "Free energy, entropy and the -dF/da pressure check");
  add_common(cmd_thermo, common, true);
  cmd_thermo->add_option("--a", a_list, "Gap width(s), comma separated")->capture_default_str();
  cmd_thermo->add_option("--T", T_list, "Temperature(s), comma separated")->capture_default_str();

  std::string replay_file, replay_out;
  auto* cmd_replay = app.add_subcommand("replay", "Re-run the command recorded in a CSV header");
  cmd_replay->add_option("file", replay_file, "CSV written by a previous run")->required();
  cmd_replay->add_option("--out", replay_out, "Write CSV to this file instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (cmd_replay->parsed()) {
      std::ifstream in(replay_file);
      if (!in) throw DomainError("cannot open '" + replay_file + "'");
      std::string line;
      constexpr std::string_view key = "# command_line=";
      while (std::getline(in, line)) {
        if (!line.starts_with(key)) continue;
        auto recorded = unquote_line(std::string_view(line).substr(key.size()));
        if (!replay_out.empty()) {
          recorded.push_back("--out");
          recorded.push_back(replay_out);
        }
        return run(recorded, out, err);
      }
      throw DomainError("no command_line header in '" + replay_file + "'");
    }

    if (cmd_pressure->parsed()) {
      Session session(args, common, "pressure");
      const auto config = plate_config(session, common, parse_length(a_text), parse_temperature(T_text));
      session.emit(out, [&](std::ostream& os) {
        auto m = session.manifest();
        append_plate_manifest(m, config);
        m.emplace_back("a_m", format_number(config.gap_a));
        m.emplace_back("T_K", format_number(config.temperature_T));
        session.append_settings(m);
        CsvWriter csv(os);
        csv.header(m);
        csv.columns(kPressureColumns);
        pressure_row(csv, config);
      });
      return kSuccess;
    }

    if (cmd_sweep->parsed()) {
      Session session(args, common, "sweep");
      const double T = parse_temperature(T_text);
      std::vector<double> values;
      if (var == "a" || var == "delta") values = grid(parse_length(from_text), parse_length(to_text), points, log_grid);
      else values = grid(parse_temperature(from_text), parse_temperature(to_text), points, log_grid);

      if (var == "delta") {
        FiveLayerConfig base;
        base.cavity_c = parse_length(cavity_text);
        base.slab_b = parse_length(slab_text);
        base.wall_model = session.model(wall_model.empty() ? common.model : wall_model);
        base.slab_model = session.model(slab_model.empty() ? common.model : slab_model);
        base.temperature_T = T;
        base.quad = session.quad();
        session.emit(out, [&](std::ostream& os) {
          auto m = session.manifest();
          m.emplace_back("var", var);
          m.emplace_back("cavity_m", format_number(base.cavity_c));
          m.emplace_back("slab_m", format_number(base.slab_b));
          m.emplace_back("wall_model", base.wall_model.describe());
          m.emplace_back("slab_model", base.slab_model.describe());
          m.emplace_back("T_K", format_number(T));
          session.append_settings(m);
          CsvWriter csv(os);
          csv.header(m);
          csv.columns({"delta_m", "a_m", "T_K", "P_Pa", "P_over_PC", "P_TE_Pa", "P_TM_Pa", "est_error_Pa"});
          for (double delta : values) {
            auto config = base;
            config.offset_delta = delta;
            const auto r = five_layer_pressure(config);
            const double ref = ideal_reference(config.vacuum_h(), delta);
            csv.row({delta, config.near_gap(), T, r.total, r.total / ref, r.te_part, r.tm_part, r.est_error});
          }
        });
        return kSuccess;
      }

      const double a = parse_length(a_text);
      const auto first = plate_config(session, common, var == "a" ? values.front() : a, var == "T" ? values.front() : T);
      session.emit(out, [&](std::ostream& os) {
        auto m = session.manifest();
        append_plate_manifest(m, first);
        m.emplace_back("var", var);
        m.emplace_back("from", format_number(values.front()));
        m.emplace_back("to", format_number(values.back()));
        m.emplace_back("points", std::to_string(points));
        m.emplace_back("grid", log_grid ? "log" : "linear");
        if (var != "a") m.emplace_back("a_m", format_number(a));
        if (var != "T") m.emplace_back("T_K", format_number(T));
        session.append_settings(m);
        CsvWriter csv(os);
        csv.header(m);
        csv.columns(kPressureColumns);
        for (double v : values) {
          auto config = first;
          (var == "a" ? config.gap_a : config.temperature_T) = v;
          pressure_row(csv, config);
        }
      });
      return kSuccess;
    }

    if (cmd_integrand->parsed()) {
      Session session(args, common, "integrand");
      const auto config = plate_config(session, common, parse_length(a_text), 0.0);
      const auto zetas = grid(parse_frequency(zeta_min), parse_frequency(zeta_max), zeta_points, !linear_grid);
      const auto kperps = grid(split_quantity(kperp_min, "k_perp").first, split_quantity(kperp_max, "k_perp").first,
                               kperp_points, !linear_grid);
      const auto samples = integrand_grid(config, zetas, kperps);
      session.emit(out, [&](std::ostream& os) {
        auto m = session.manifest();
        append_plate_manifest(m, config);
        m.emplace_back("a_m", format_number(config.gap_a));
        m.emplace_back("T_K", "0");
        m.emplace_back("zeta_grid", format_number(zetas.front()) + ":" + format_number(zetas.back()) + ":" +
                                        std::to_string(zeta_points) + (linear_grid ? ":linear" : ":log"));
        m.emplace_back("kperp_grid", format_number(kperps.front()) + ":" + format_number(kperps.back()) + ":" +
                                         std::to_string(kperp_points) + (linear_grid ? ":linear" : ":log"));
        session.append_settings(m);
        CsvWriter csv(os);
        csv.header(m);
        csv.columns({"zeta", "kperp", "I_TE", "I_TM", "I_total"});
        for (const auto& s : samples) csv.row({s.zeta, s.k_perp, s.te, s.tm, s.te + s.tm});
      });
      return kSuccess;
    }

    if (cmd_slab->parsed()) {
      Session session(args, common, "slab");
      FiveLayerConfig base;
      base.cavity_c = parse_length(cavity_text);
      base.slab_b = parse_length(slab_text);
      base.wall_model = session.model(wall_model.empty() ? common.model : wall_model);
      base.slab_model = session.model(slab_model.empty() ? common.model : slab_model);
      base.temperature_T = parse_temperature(T_text);
      base.quad = session.quad();
      base.validate();
      std::vector<double> deltas;
      if (!delta_text.empty()) {
        deltas.push_back(parse_length(delta_text));
      } else {
        const double last = 0.5 * base.vacuum_h() - 50e-9;
        if (!(last > 0.0)) throw DomainError("cavity too narrow for the default delta sweep");
        deltas = grid(0.0, last, delta_sweep > 0 ? delta_sweep : 21, false);
      }
      session.emit(out, [&](std::ostream& os) {
        auto m = session.manifest();
        m.emplace_back("cavity_m", format_number(base.cavity_c));
        m.emplace_back("slab_m", format_number(base.slab_b));
        m.emplace_back("wall_model", base.wall_model.describe());
        m.emplace_back("slab_model", base.slab_model.describe());
        m.emplace_back("T_K", format_number(base.temperature_T));
        session.append_settings(m);
        CsvWriter csv(os);
        csv.header(m);
        csv.columns({"delta_m", "P_Pa", "P_over_PCref", "est_error_Pa"});
        for (double delta : deltas) {
          auto config = base;
          config.offset_delta = delta;
          const auto r = five_layer_pressure(config);
          const double ref = ideal_reference(config.vacuum_h(), delta);
          csv.row({delta, r.total, delta == 0.0 ? 0.0 : r.total / ref, r.est_error});
        }
      });
      return kSuccess;
    }

    if (cmd_thermo->parsed()) {
      Session session(args, common, "thermo");
      const auto gaps = parse_list(a_list, parse_length);
      const auto temps = parse_list(T_list, parse_temperature);
      const auto first = plate_config(session, common, gaps.front(), temps.front());
      session.emit(out, [&](std::ostream& os) {
        auto m = session.manifest();
        append_plate_manifest(m, first);
        m.emplace_back("a_m", a_list);
        m.emplace_back("T_K", T_list);
        session.append_settings(m);
        CsvWriter csv(os);
        csv.header(m);
        csv.columns({"a_m", "T_K", "F_J_per_m2", "S_J_per_m2K", "P_check_Pa", "P_Pa"});
        for (double a : gaps) {
          for (double T : temps) {
            auto config = first;
            config.gap_a = a;
            config.temperature_T = T;
            const auto t = thermodynamics(config);
            csv.row({a, T, t.free_energy_F, t.entropy_S, t.pressure_check, pressure(config).total});
          }
        }
      });
      return kSuccess;
    }
  } catch (const ConvergenceError& e) {
    err << "convergence failure: " << e.what() << " (partial=" << format_number(e.partial())
        << ", achieved_error=" << format_number(e.achieved_error()) << ")\n";
    return kConvergence;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedModel& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const TableError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace casimir::cli
