#include "loopopt/cli.hpp"

int main(int argc, char** argv) { return loopopt::cli::main(argc, argv); }
