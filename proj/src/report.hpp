#pragma once

#include <string>
#include <vector>

namespace szt {

// One row of a machine-readable check/metric table. Status is PASS or FAIL
// for hard assertions and FLAG for reported-not-asserted comparisons.
struct CheckRow {
  std::string table;
  std::string check;
  std::string status;  // PASS | FAIL | FLAG
  std::string inputs;
  double observed = 0.0;
  double expected = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  std::string detail;
};

CheckRow make_row(std::string table, std::string check, std::string inputs,
                  double observed, double expected, double tolerance,
                  std::string detail = "");
CheckRow make_flag(std::string table, std::string check, std::string inputs,
                   double observed, double expected, std::string detail = "");

// Serialization with explicit 17-significant-digit numeric formatting so
// diffs between runs and platforms are meaningful.
std::string format_g17(double v);
std::string to_csv(const std::vector<CheckRow>& rows);
void write_csv(const std::vector<CheckRow>& rows, const std::string& path);
std::vector<CheckRow> read_csv(const std::string& path);

int count_status(const std::vector<CheckRow>& rows, const std::string& status);

}  // namespace szt
