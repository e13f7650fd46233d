#include "levyspec/cli.hpp"

int main(int argc, char** argv) { return levyspec::cli::run_main(argc, argv); }
