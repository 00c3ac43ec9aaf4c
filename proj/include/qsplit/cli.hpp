#pragma once

#include <string>
#include <vector>

namespace qsplit::cli {

/// Entry point of the qsplit tool. Returns 0 on success, 2 on invalid
/// input (bad flag, out-of-range parameter, unwritable output) and 1 when
/// a numerical routine fails to converge or an identity check fails.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

/// "lo:hi:count".
struct GridArg {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};
GridArg parse_grid(const std::string& text);

/// "2/3" or "0.5".
double parse_fraction(const std::string& text);

std::vector<double> parse_list(const std::string& text);

}  // namespace qsplit::cli
