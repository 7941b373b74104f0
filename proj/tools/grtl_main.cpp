#include "grtl/cli.hpp"

int main(int argc, char** argv) {
  return grtl::run_command({argv + 1, argv + argc});
}
