#include "homtype/cli.hpp"

int main(int argc, char** argv) { return homtype::run_cli(argc, argv); }
