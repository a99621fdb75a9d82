#include "tmap/cli.hpp"

int main(int argc, char** argv) { return tmap::cli_entry(argc, argv); }
