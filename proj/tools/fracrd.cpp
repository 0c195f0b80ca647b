#include "fracrd/app.hpp"

int main(int argc, char** argv) { return fracrd::cli_main(argc, argv); }
