#include "cpt/cli.hpp"

int main(int argc, char** argv) { return cpt::run_cli(argc, argv); }
