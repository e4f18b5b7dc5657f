#include "locaudit/cli.hpp"

int main(int argc, char** argv) { return locaudit::cli_main(argc, argv); }
