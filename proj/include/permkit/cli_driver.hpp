#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace permkit::cli {

/// Batch front end: permkit classify|check|sample|metric <file> [flags].
/// Verdicts are data, never process errors. Exit codes: 0 success,
/// 2 parse/usage error, 3 internal numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace permkit::cli
