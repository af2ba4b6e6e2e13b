#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace kerr {

/// Plot-ready numeric table with an optional per-row text tag and
/// key/value metadata emitted as leading '#' comment lines in CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string tag_column;          // empty: no tag column
  std::vector<std::string> tags;   // one per row when tag_column is set
  std::vector<std::pair<std::string, std::string>> metadata;

  std::string to_csv() const;
};

/// Writes via a temporary file and rename, so readers never see a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace kerr
