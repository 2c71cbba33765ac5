#include "dcl/cli.hpp"

int main(int argc, char** argv) { return dcl::cli_main(argc, argv); }
