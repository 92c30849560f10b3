#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nelsonlab {

/// Dispatches one CLI invocation.  Reports go to `out` as JSON with a
/// top-level "schema_version"; usage errors print to `err` and return 2;
/// domain errors return 1 with a JSON error object on `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nelsonlab
