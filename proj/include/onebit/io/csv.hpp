#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace onebit {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string csv_num(double v, int precision = 10) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

// Line-oriented CSV emitter: LF endings, '#' metadata comments before the
// header, plain comma joining (fields here never contain commas or quotes).
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot open output file: " + path);
  }

  void comment(const std::string& text) { out_ << "# " << text << "\n"; }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  void close() {
    out_.flush();
    out_.close();
    if (out_.fail()) throw IoError("failed writing output file: " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace onebit
