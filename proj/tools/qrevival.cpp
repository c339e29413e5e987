#include "qrevival/cli.hpp"

int main(int argc, char** argv) { return qrevival::cli::run_cli(argc, argv); }
