#include "magcool/cli.hpp"

int main(int argc, char** argv) { return magcool::run_cli(argc, argv); }
