#include "vortex/run_config.hpp"

int main(int argc, char** argv) { return vortex::runCli(argc, argv); }
