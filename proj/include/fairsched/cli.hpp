#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fairsched/workload.hpp"

namespace fairsched {

/// Full command-line front end, in-process so tests can drive it. `args`
/// excludes the program name. Returns the process exit code: 0 success,
/// 2 usage error or unknown policy, 3 unreadable or malformed input,
/// 4 internal invariant violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Weight flag syntax: "uniform", or a discrete set "v:p,v:p,..." such as
/// "1:0.5,2:0.5". Throws ParamError on anything else.
WeightModel parse_weights(const std::string& text);

} // namespace fairsched
