#include "tvnet/cli.hpp"

int main(int argc, char** argv) { return tvnet::run_cli(argc, argv); }
