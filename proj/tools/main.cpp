#include "logitmfg/cli.hpp"

int main(int argc, char** argv) { return logitmfg::run_command(argc, argv); }
