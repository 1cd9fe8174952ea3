#include "carleson/cli.hpp"

int main(int argc, char** argv) { return carleson::run_cli(argc, argv); }
