#include "cavmet/scenario.hpp"

int main(int argc, char** argv) { return cavmet::cli_main(argc, argv); }
