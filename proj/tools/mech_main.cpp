#include "mech/cli.hpp"

int main(int argc, char** argv) { return mech::cli_main(argc, argv); }
