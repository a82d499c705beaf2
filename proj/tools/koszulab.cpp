#include "koszulab/cli.hpp"

int main(int argc, char** argv) { return koszulab::cli::main(argc, argv); }
