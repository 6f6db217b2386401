#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace szt {

CheckRow make_row(std::string table, std::string check, std::string inputs,
                  double observed, double expected, double tolerance,
                  std::string detail) {
  CheckRow r;
  r.table = std::move(table);
  r.check = std::move(check);
  r.inputs = std::move(inputs);
  r.observed = observed;
  r.expected = expected;
  r.abs_err = std::fabs(observed - expected);
  r.rel_err = expected != 0.0 ? r.abs_err / std::fabs(expected) : r.abs_err;
  r.status = r.abs_err <= tolerance ? "PASS" : "FAIL";
  r.detail = std::move(detail);
  return r;
}

CheckRow make_flag(std::string table, std::string check, std::string inputs,
                   double observed, double expected, std::string detail) {
  CheckRow r = make_row(std::move(table), std::move(check), std::move(inputs),
                        observed, expected, 0.0, std::move(detail));
  r.status = "FLAG";
  return r;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
std::string escape_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}
}  // namespace

std::string to_csv(const std::vector<CheckRow>& rows) {
  std::ostringstream out;
  out << "table,check,status,inputs,observed,expected,abs_err,rel_err,detail\n";
  for (const auto& r : rows) {
    out << escape_csv(r.table) << ',' << escape_csv(r.check) << ',' << r.status
        << ',' << escape_csv(r.inputs) << ',' << format_g17(r.observed) << ','
        << format_g17(r.expected) << ',' << format_g17(r.abs_err) << ','
        << format_g17(r.rel_err) << ',' << escape_csv(r.detail) << '\n';
  }
  return out.str();
}

void write_csv(const std::vector<CheckRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << to_csv(rows);
  if (!f) throw IoError("short write: " + path);
}

std::vector<CheckRow> read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  std::vector<CheckRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 9) throw IoError("malformed csv row in " + path);
    CheckRow r;
    r.table = fields[0];
    r.check = fields[1];
    r.status = fields[2];
    r.inputs = fields[3];
    r.observed = std::stod(fields[4]);
    r.expected = std::stod(fields[5]);
    r.abs_err = std::stod(fields[6]);
    r.rel_err = std::stod(fields[7]);
    r.detail = fields[8];
    rows.push_back(std::move(r));
  }
  return rows;
}

int count_status(const std::vector<CheckRow>& rows, const std::string& status) {
  int n = 0;
  for (const auto& r : rows) {
    if (r.status == status) ++n;
  }
  return n;
}

}  // namespace szt
