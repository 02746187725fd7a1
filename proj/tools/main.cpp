#include "loogp/cli.hpp"

int main(int argc, char** argv) { return loogp::run_cli(argc, argv); }
