#pragma once

// Batch driver: reads a DSL file, runs one analysis command against a
// declared algebra or tribe, and reports as versioned JSON on stdout.
// Reports are byte-stable for a fixed input file and option set; timing is
// emitted only on request so the stability survives.  Exit codes: 0 all
// verdicts pass (undecided entries allowed unless --strict), 1 a checked law
// failed, 2 the input was unusable (parse error, missing declaration, wrong
// backend for the command).

#include <string>
#include <vector>

namespace emv {

struct CliResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

// argv-style arguments without the program name.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace emv
