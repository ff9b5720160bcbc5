#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "casimir/dielectric.hpp"

namespace casimir::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kUsage = 2,
  kConvergence = 3,
};

/// "1um", "1000nm", "1e-6m", "0.5mm", "2µm"; a bare number is metres.
double parse_length(std::string_view text);

/// "300K" or "300".
double parse_temperature(std::string_view text);

/// "9.03eV" or "1.37e16rad/s"; a bare number is rad/s.
double parse_frequency(std::string_view text);

/// ideal | vacuum | plasma:<wp> | drude:<wp>,<gamma> | table:<path>[,drude-tail:<wp>,<gamma>]
/// Relative table paths are tried as given, then under each directory of
/// `table_dirs` (colon separated, usually $CASIMIR_TABLE_DIR).
DielectricModel parse_model(std::string_view spec, std::string_view table_dirs = {});

/// Float formatting used for every CSV cell and header value (9 significant digits).
std::string format_number(double x);

/// Entry point shared by the executable and the tests. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace casimir::cli
