#include "memkern/cli.hpp"

int main(int argc, char** argv) {
  return memkern::cli_main(argc, argv);
}
