#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace lsnn {

/// Round-trip-safe decimal rendering of a double. Used for every CSV cell so
/// that re-running a command reproduces output files byte for byte.
inline std::string dtos(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    path_ = path;
  }

  void raw_line(const std::string& line) { out_ << line << "\n"; }

  void header(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
      if (!first) out_ << ",";
      out_ << c;
      first = false;
    }
    out_ << "\n";
  }

  void begin_row() { first_cell_ = true; }
  void cell(double v) { sep(); out_ << dtos(v); }
  void cell(long long v) { sep(); out_ << v; }
  void cell(int v) { sep(); out_ << v; }
  void cell(const std::string& v) { sep(); out_ << v; }
  void end_row() { out_ << "\n"; }

  void row(std::initializer_list<double> vals) {
    begin_row();
    for (double v : vals) cell(v);
    end_row();
  }

  ~CsvWriter() {
    out_.flush();
  }

 private:
  void sep() {
    if (!first_cell_) out_ << ",";
    first_cell_ = false;
  }

  std::ofstream out_;
  std::string path_;
  bool first_cell_ = true;
};

}  // namespace lsnn
