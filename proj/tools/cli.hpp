#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace iqlambda::cli {

enum ExitCode { ExitOk = 0, ExitFailure = 1, ExitUsage = 2, ExitBudget = 3 };

// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace iqlambda::cli
