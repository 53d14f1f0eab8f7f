#include <iostream>

#include "entcert/cli.hpp"

int main(int argc, char** argv) { return entcert::cli_main(argc, argv, std::cout, std::cerr); }
