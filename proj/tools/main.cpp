#include "peakwave/cli.hpp"

int main(int argc, char** argv) { return peakwave::cli::main(argc, argv); }
