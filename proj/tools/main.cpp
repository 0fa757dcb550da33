#include "faultfem/cli.hpp"

int main(int argc, char** argv) { return faultfem::run_cli(argc, argv); }
