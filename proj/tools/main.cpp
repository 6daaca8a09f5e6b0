#include "cli.hpp"

int main(int argc, char** argv) { return pcn::cli::main_entry(argc, argv); }
