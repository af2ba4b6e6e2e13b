#include "kerr/series_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "kerr/error.hpp"
#include "kerr/table.hpp"

namespace kerr {

static_assert(std::endian::native == std::endian::little,
              "series I/O assumes a little-endian host");

namespace {

constexpr char kMagic[12] = {'K', 'E', 'R', 'R', 'S', 'E', 'R', 'I', 'E', 'S', '\0', '\0'};

template <class T>
void put(std::string& out, const T& v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <class T>
  T get(const char* what) {
    T v;
    need(sizeof(T), what);
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string take(std::size_t n, const char* what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  const char* cursor() const { return bytes_.data() + pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(std::string("series file truncated while reading ") + what);
    }
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_series(const TimeSeries& s) {
  std::string out;
  out.reserve(80 + s.label.size() + 8 * s.size());
  out.append(kMagic, sizeof kMagic);
  put(out, kSeriesFormatVersion);
  put(out, s.dt);
  put(out, static_cast<std::uint64_t>(s.size()));
  put(out, static_cast<std::uint32_t>(s.label.size()));
  out.append(s.label);
  out.append(reinterpret_cast<const char*>(s.params_hash.data()), s.params_hash.size());
  out.append(reinterpret_cast<const char*>(s.values.data()), 8 * s.values.size());
  return out;
}

TimeSeries decode_series(const std::string& bytes) {
  Reader r(bytes);
  if (r.take(sizeof kMagic, "magic") != std::string(kMagic, sizeof kMagic)) {
    throw FormatError("not a series file (bad magic)");
  }
  const auto version = r.get<std::uint32_t>("version");
  if (version != kSeriesFormatVersion) {
    throw FormatError("unsupported series format version " + std::to_string(version));
  }
  TimeSeries s;
  s.dt = r.get<double>("dt");
  const auto length = r.get<std::uint64_t>("length");
  const auto label_size = r.get<std::uint32_t>("label size");
  s.label = r.take(label_size, "label");
  const std::string fp = r.take(s.params_hash.size(), "fingerprint");
  std::memcpy(s.params_hash.data(), fp.data(), fp.size());
  if (r.remaining() != 8 * length) {
    throw FormatError("series file holds " + std::to_string(r.remaining()) +
                      " sample bytes, header promises " + std::to_string(8 * length));
  }
  s.values.resize(length);
  std::memcpy(s.values.data(), r.cursor(), 8 * length);
  if (!(s.dt > 0.0) || !std::isfinite(s.dt)) throw FormatError("series file has invalid dt");
  return s;
}

void write_series(const std::filesystem::path& path, const TimeSeries& series) {
  write_text_atomic(path, encode_series(series));
}

TimeSeries read_series(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open series file " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_series(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string series_to_csv(const TimeSeries& s) {
  std::string out;
  char buf[64];
  out += "# label: " + s.label + "\n";
  std::snprintf(buf, sizeof buf, "%.17g", s.dt);
  out += std::string("# dt: ") + buf + "\n";
  out += "# params_hash: " + to_hex(s.params_hash) + "\n";
  out += "t,value\n";
  for (std::size_t j = 0; j < s.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,", static_cast<double>(j) * s.dt);
    out += buf;
    std::snprintf(buf, sizeof buf, "%.17g\n", s.values[j]);
    out += buf;
  }
  return out;
}

TimeSeries series_from_csv(const std::string& text) {
  TimeSeries s;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  bool have_dt = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.size() > colon + 2 ? line.substr(colon + 2) : "";
      if (key == "label") s.label = value;
      if (key == "dt") {
        s.dt = std::strtod(value.c_str(), nullptr);
        have_dt = true;
      }
      if (key == "params_hash") s.params_hash = fingerprint_from_hex(value);
      continue;
    }
    if (!header) {
      if (line != "t,value") throw FormatError("CSV line " + std::to_string(lineno) + ": expected header t,value");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw FormatError("CSV line " + std::to_string(lineno) + ": expected two columns");
    }
    char* end = nullptr;
    const double v = std::strtod(line.c_str() + comma + 1, &end);
    if (end == line.c_str() + comma + 1) {
      throw FormatError("CSV line " + std::to_string(lineno) + ": bad number");
    }
    s.values.push_back(v);
  }
  if (!have_dt) throw FormatError("CSV series lacks a '# dt:' line");
  return s;
}

}  // namespace kerr
