#include <sdmcts/cli.hpp>

int main(int argc, char** argv) { return sdmcts::cli::main(argc, argv); }
