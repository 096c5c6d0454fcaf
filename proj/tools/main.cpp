#include "commands.hpp"

int main(int argc, char** argv) { return pep::cli::run_cli(argc, argv); }
