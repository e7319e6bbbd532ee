#include "cglab/cli.hpp"

int main(int argc, char** argv) { return cglab::cli_main(argc, argv); }
