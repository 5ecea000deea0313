#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return stellar::cli::dispatch(argc, argv, std::cout, std::cerr); }
