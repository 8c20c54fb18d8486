#include "uncert/cli.hpp"

int main(int argc, char** argv) { return uncert::run_cli(argc, argv); }
