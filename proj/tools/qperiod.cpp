#include "qperiod/cli.hpp"

int main(int argc, char** argv) { return qperiod::cli::run(argc, argv); }
