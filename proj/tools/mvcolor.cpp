#include "mvcolor/cli.hpp"

int main(int argc, char** argv) { return mvcolor::run_cli(argc, argv); }
