#include <string>
#include <vector>

#include "parabound/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return parabound::cli(args);
}
