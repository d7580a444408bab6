#include "gcq/cli.hpp"

int main(int argc, char** argv) { return gcq::run_cli(argc, argv); }
