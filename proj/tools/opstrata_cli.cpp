#include "opstrata/cli.hpp"

int main(int argc, char** argv) { return opstrata::cli_main(argc, argv); }
