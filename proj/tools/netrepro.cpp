#include "netrepro/cli.hpp"

int main(int argc, char** argv) { return netrepro::cli::run(argc, argv); }
