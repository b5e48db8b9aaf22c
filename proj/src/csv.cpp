#include "ctshift/csv.hpp"

#include "ctshift/types.hpp"

#include <cstdio>

namespace ctshift {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), n_cols_(header.size()) {
  if (!out_) throw UsageError("csv: cannot open " + path.string() + " for writing");
  write_row(header);
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  require(cells.size() == n_cols_, "csv: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

}  // namespace ctshift
