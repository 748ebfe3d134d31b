#include "commands.hpp"

int main(int argc, char** argv) { return sdlab::cli::main_entry(argc, argv); }
