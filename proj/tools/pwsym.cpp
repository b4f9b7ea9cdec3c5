#include <pwsym/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return pwsym::cli_main(argc, argv, std::cout, std::cerr); }
