#include "qsplit/cli.hpp"

int main(int argc, char** argv) { return qsplit::cli::run(argc, argv); }
