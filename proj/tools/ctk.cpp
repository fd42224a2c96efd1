#include <iostream>

#include "ctk/cli.hpp"

int main(int argc, char** argv) { return ctk::cli::dispatch(argc, argv, std::cout, std::cerr); }
