#pragma once

// Command-line surface: subcommand dispatch, file/stdin plumbing, budgets,
// and deterministic JSON reports. Kept as a library function so tests can
// drive it in-process with captured streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace cvx {

// Exit statuses: 0 success/verified, 1 property violated (the report or the
// error message carries the certificate), 2 usage or input error, 3 search
// budget exceeded.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace cvx
