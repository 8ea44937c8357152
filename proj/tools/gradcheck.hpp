#pragma once

#include <ostream>
#include <string>

namespace fbplan::tools {

/// Central-difference checks of the analytic gradients. Module is one of
/// all, spline, penalty, polytope. Returns true when every check passes.
bool run_gradcheck(const std::string& module, std::ostream& out);

}  // namespace fbplan::tools
