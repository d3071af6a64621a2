#include <iostream>

#include "cpi/commands.hpp"

int main(int argc, char** argv) {
  return cpi::cli::main_entry(argc, argv, std::cout, std::cerr);
}
