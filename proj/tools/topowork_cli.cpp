#include <vector>
#include <string>

#include "topowork/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return topowork::cli::run(args);
}
