#include "gpcover/commands.hpp"

int main(int argc, char** argv) { return gpcover::run_cli(argc, argv); }
