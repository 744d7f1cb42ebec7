#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace holgr::cli {

// args excludes the program name. Returns 0 on success, 1 on verification failure, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace holgr::cli
