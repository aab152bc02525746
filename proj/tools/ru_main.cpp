#include "ru/bench/cli.hpp"

int main(int argc, char** argv) { return ru::cli::run(argc, argv); }
