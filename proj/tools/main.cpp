#include "hadmm/cli.hpp"

int main(int argc, char** argv) { return hadmm::run_cli(argc, argv); }
