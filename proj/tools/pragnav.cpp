#include "pragnav/cli/commands.hpp"

int main(int argc, char** argv) { return pragnav::cli::run(argc, argv); }
