#include "sstokes/cli.hpp"

int main(int argc, char** argv) { return sstokes::cli_main(argc, argv); }
