#include "cli/commands.hpp"

int main(int argc, char** argv) { return fracberno::cli::run(argc, argv); }
