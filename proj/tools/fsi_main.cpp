#include <string>
#include <vector>

#include "fsi/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fsi::cli_main(args);
}
