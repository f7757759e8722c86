#include "heis/harness.hpp"

int main(int argc, char** argv) { return heis::cli_main(argc, argv); }
