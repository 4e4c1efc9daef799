// CSV emission with shortest round-trip decimals and a trailing
// generated-by / config-hash metadata comment.
#ifndef MFHS_CSV_HPP
#define MFHS_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

#include "mfhs/common.hpp"

namespace mfhs {

inline constexpr const char* kGeneratedBy = "mfhs-0.1.0";

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header,
            std::string config_hash)
      : path_(path), hash_(std::move(config_hash)) {
    out_.open(path);
    if (!out_) throw IoError("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  ~CsvWriter() {
    out_ << "# " << kGeneratedBy << ", " << hash_ << '\n';
    out_.close();
  }

 private:
  std::string path_;
  std::string hash_;
  std::ofstream out_;
};

}  // namespace mfhs

#endif  // MFHS_CSV_HPP
