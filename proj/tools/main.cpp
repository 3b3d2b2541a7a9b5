#include "tbc2d/harness.hpp"

int main(int argc, char** argv) { return tbc2d::cli_main(argc, argv); }
