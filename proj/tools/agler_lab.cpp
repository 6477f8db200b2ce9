#include "agler/cli.hpp"

int main(int argc, char** argv) { return agler::cli::run(argc, argv); }
