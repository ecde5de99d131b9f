#include <string>
#include <vector>

#include "pla/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pla::cli::run(args);
}
