#pragma once

#include <string>
#include <vector>

#include "report.hpp"

namespace szt {

// Named verification suites runnable from the command line:
//   sensitivity, entropy, mse, pacbayes, mfpt, snr, repro, all.
// PASS/FAIL rows are hard assertions; FLAG rows report quantities whose
// displayed relationships are known not to hold as stated and are therefore
// compared but never failed on.
std::vector<CheckRow> run_verify_suite(const std::string& suite);
std::vector<std::string> verify_suite_names();

// Closed-form vs oracle tables for the `analyze` command:
//   sensitivity, dzmse, mse, entropy, mgf, pacbayes, mfpt.
std::vector<CheckRow> run_analyze_table(const std::string& quantity);
std::vector<std::string> analyze_table_names();

}  // namespace szt
