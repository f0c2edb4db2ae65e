#include "plap/cli.hpp"

int main(int argc, char** argv) { return plap::cli_main(argc, argv); }
