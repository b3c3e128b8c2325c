#include <cstdio>

#include "fracg/cli.hpp"

int main(int argc, char** argv) { return fracg::cli_main(argc, argv); }
