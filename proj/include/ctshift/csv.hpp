#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace ctshift {

/// Shortest-of-17-significant-digits decimal; round-trips to the same bits.
std::string format_double(double v);

// Minimal CSV emitter: comma-separated, one header row, LF endings, UTF-8.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void write_row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
  std::size_t n_cols_;
};

}  // namespace ctshift
