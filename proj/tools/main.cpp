#include "doublecircle/cli.hpp"

int main(int argc, char** argv) { return cli::run_cli(argc, argv); }
