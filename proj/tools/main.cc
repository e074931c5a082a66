#include <iostream>
#include <string>
#include <vector>

#include "conjtm/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return conjtm::dispatch(args, std::cout, std::cerr);
}
