#include "lotflow/cli.hpp"

int main(int argc, char** argv) { return lotflow::run_cli(argc, argv); }
