#include "hsvd/cli.hpp"

int main(int argc, char** argv) { return hsvd::cli::run(argc, argv); }
