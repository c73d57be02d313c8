#include "qrabi/cli.hpp"

int main(int argc, char** argv) { return qrabi::cli::main_entry(argc, argv); }
