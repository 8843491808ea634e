#include "rellich/cli.hpp"

int main(int argc, char** argv) { return rellich::run_cli(argc, argv); }
