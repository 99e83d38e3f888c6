#include "lpq/cli.hpp"

int main(int argc, char** argv) { return lpq::run_cli(argc, argv); }
