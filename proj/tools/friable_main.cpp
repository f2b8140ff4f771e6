#include "friable/cli.hpp"

int main(int argc, char** argv) { return friable::run_cli(argc, argv); }
