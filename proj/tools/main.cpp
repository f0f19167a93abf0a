#include "cachenet/cli.hpp"

int main(int argc, char** argv) { return cachenet::cli_main(argc, argv); }
