#include "momentlab/cli.hpp"

int main(int argc, char** argv) { return momentlab::cli::main(argc, argv); }
