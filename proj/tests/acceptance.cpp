#include "teps/registry.hpp"

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

// One criterion per invocation; prints the checks, then a single pass/fail line.
int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <criterion 1.." << teps::kCriterionCount << ">\n";
    return 2;
  }
  try {
    const auto rep = teps::run_criterion(std::stoi(argv[1]));
    for (const auto& c : rep.checks) std::cout << "  " << teps::format_check(c) << "\n";
    std::cout << teps::format_summary(rep) << std::endl;
    return rep.pass() ? EXIT_SUCCESS : EXIT_FAILURE;
  } catch (const std::exception& e) {
    std::cout << "criterion " << argv[1] << ": FAIL - error: " << e.what() << std::endl;
    return EXIT_FAILURE;
  }
}
