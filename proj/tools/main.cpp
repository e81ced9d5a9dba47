#include "cardevo/cli.hpp"

int main(int argc, char** argv) { return cardevo::cli_main(argc, argv); }
