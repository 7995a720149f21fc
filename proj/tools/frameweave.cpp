#include "frameweave/cli.hpp"

int main(int argc, char** argv) { return frameweave::run_cli(argc, argv); }
