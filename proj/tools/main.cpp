#include "pcep/cli.hpp"

int main(int argc, char** argv) { return pcep::cli::main(argc, argv); }
