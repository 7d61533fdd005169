#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tkz {

/// Entry point of the tkz tool. `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tkz
