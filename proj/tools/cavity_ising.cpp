#include <string>
#include <vector>

#include "cavity_ising/acceptance.hpp"
#include "cavity_ising/app/commands.hpp"

int main(int argc, char** argv) {
  cavity_ising::app::verify_hook() = cavity_ising::acceptance::run_selected;
  return cavity_ising::app::run(std::vector<std::string>(argv + 1, argv + argc));
}
