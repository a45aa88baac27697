#include "vsynth/cli.hpp"

int main(int argc, char** argv) { return vsynth::run_cli(argc, argv); }
