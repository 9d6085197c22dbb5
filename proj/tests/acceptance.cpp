// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any
// criterion fails. An optional argument selects criteria, e.g. "1,2,3".

#include <iostream>
#include <string>

#include "cavity_ising/acceptance.hpp"

int main(int argc, char** argv) {
  const std::string selection = argc > 1 ? argv[1] : "all";
  return cavity_ising::acceptance::run_selected(selection, std::cout);
}
