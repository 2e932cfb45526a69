#pragma once

#include <string>
#include <vector>

namespace flowtop {

// Command line driver, callable in-process for tests. `args` excludes the
// program name. Returns the process exit code: 0 on success, 2 on invalid
// configuration or arguments, 3 when the theorem pipeline finds no valid
// time, 1 on unexpected failures.
int run_cli(const std::vector<std::string>& args);

}  // namespace flowtop
