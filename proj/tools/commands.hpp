#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdhomog::cli {

/// Entry point of the fdhomog tool. `args` excludes the program name.
/// Returns 0 iff the requested computation completed; test verdicts never
/// change the exit code. Usage errors return 2, runtime failures 1.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fdhomog::cli
