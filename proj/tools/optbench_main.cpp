#include "optbench/cli.hpp"

int main(int argc, char** argv) {
  return optbench::cli_run(argc, argv);
}
