#include "medsyn/cli.hpp"

int main(int argc, char** argv) { return medsyn::cli::dispatch(argc, argv); }
