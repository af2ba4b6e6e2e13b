#include "kerr/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "kerr/error.hpp"

namespace kerr {

std::string Table::to_csv() const {
  std::ostringstream out;
  for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  if (!tag_column.empty()) out << ',' << tag_column;
  out << '\n';
  char buf[32];
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", rows[r][c]);
      out << (c ? "," : "") << buf;
    }
    if (!tag_column.empty()) out << ',' << (r < tags.size() ? tags[r] : "");
    out << '\n';
  }
  return out.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace kerr
