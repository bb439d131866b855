#pragma once

#include <string>
#include <vector>

namespace fsi {

// Entry point behind the fsi binary. Returns the process exit code:
// 0 success, 2 usage error, 1 runtime failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace fsi
