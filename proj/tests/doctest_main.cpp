#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <string>

// Path of the command-line binary, passed by ctest as --cli=<path>; empty
// when the suite does not drive the CLI.
std::string g_cli_path;

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--cli=", 0) == 0) g_cli_path = arg.substr(6);
  }
  doctest::Context context(argc, argv);
  return context.run();
}
