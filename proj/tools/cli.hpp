#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stellar/state.hpp"

namespace stellar::cli {

/// Malformed command-line value; exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decimal or a rational multiple of pi: "0.5", "pi", "2pi/3", "3*pi/4".
double parse_angle(std::string_view text);

/// Named states:
///   ghz N | w N | dicke N K | bell psi+|psi-|phi+|phi- | tetra | rec4 THETA PHI
///   coherent N THETA PHI | a uniform bitstring such as 000 | @path.json
SymmetricState named_state(const std::vector<std::string>& tokens);

/// Runs one subcommand. Results go to `out` (or the --out file), diagnostics to
/// `err`. Returns 0, 2 (usage), 3 (domain/resource) or 4 (numeric/symmetry).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stellar::cli
