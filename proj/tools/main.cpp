#include "htdt/cli.hpp"

int main(int argc, char** argv) { return htdt::cli::run(argc, argv); }
