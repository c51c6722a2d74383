#include "fraclog/cli.hpp"

int main(int argc, char** argv) { return fraclog::cli::run(argc, argv); }
