#include "radarmi/experiments.hpp"

int main(int argc, char** argv) { return radarmi::cli_main(argc, argv); }
