#include "quasilab/cli.hpp"

int main(int argc, char** argv) { return quasilab::cli::run(argc, argv); }
