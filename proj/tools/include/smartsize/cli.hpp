#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smartsize::cli {

// Runs one command line (without the program name). Results go to `out`
// or to the --out file; failures are reported on `err` as a single line
// starting with "error:". Returns 0 on success, 1 for usage or config
// errors, 2 for domain, numerical or data errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smartsize::cli
