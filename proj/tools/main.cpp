#include "contor/cli.hpp"

int main(int argc, char** argv) { return contor::cli::run(argc, argv); }
