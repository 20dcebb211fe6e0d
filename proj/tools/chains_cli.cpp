#include "chains/cli.hpp"

int main(int argc, char** argv) { return chains::cli::main_entry(argc, argv); }
