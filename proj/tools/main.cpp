#include "proofkit/cli.hpp"

int main(int argc, char** argv) { return proofkit::cli::dispatch(argc, argv); }
