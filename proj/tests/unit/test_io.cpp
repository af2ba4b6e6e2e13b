#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "kerr/error.hpp"
#include "kerr/fingerprint.hpp"
#include "kerr/model.hpp"
#include "kerr/series_io.hpp"
#include "kerr/states.hpp"
#include "kerr/table.hpp"

namespace fs = std::filesystem;

namespace {

kerr::TimeSeries sample_series() {
  kerr::TimeSeries t;
  t.dt = 0.1;
  t.label = "mean_N";
  t.values = {0.0, 1.0 / 3.0, -2.5e-300, std::numeric_limits<double>::max(), 1e-310, 7.0};
  t.params_hash = kerr::fingerprint(kerr::ModelParams{1, 1, 5, 1},
                                    kerr::StateSpec::from_nu(kerr::StateKind::PhotonAdded, 10, 1));
  return t;
}

void expect_same(const kerr::TimeSeries& a, const kerr::TimeSeries& b) {
  EXPECT_EQ(a.dt, b.dt);
  EXPECT_EQ(a.label, b.label);
  EXPECT_EQ(a.params_hash, b.params_hash);
  ASSERT_EQ(a.values.size(), b.values.size());
  EXPECT_EQ(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)), 0);
}

TEST(SeriesIo, BinaryRoundTrip) {
  const auto t = sample_series();
  expect_same(kerr::decode_series(kerr::encode_series(t)), t);
}

TEST(SeriesIo, FileRoundTripIsByteStable) {
  const auto dir = fs::temp_directory_path() / "kerr_io_test";
  fs::create_directories(dir);
  const auto t = sample_series();
  kerr::write_series(dir / "a.series", t);
  const auto back = kerr::read_series(dir / "a.series");
  expect_same(back, t);
  kerr::write_series(dir / "b.series", back);
  EXPECT_EQ(kerr::encode_series(kerr::read_series(dir / "b.series")), kerr::encode_series(t));
  fs::remove_all(dir);
}

TEST(SeriesIo, LayoutHeader) {
  const auto bytes = kerr::encode_series(sample_series());
  EXPECT_EQ(bytes.substr(0, 12), std::string("KERRSERIES\0\0", 12));
  std::uint32_t version = 0;
  std::memcpy(&version, bytes.data() + 12, 4);
  EXPECT_EQ(version, kerr::kSeriesFormatVersion);
  EXPECT_EQ(bytes.size(), 12u + 4 + 8 + 8 + 4 + 6 + 32 + 6 * 8);
}

TEST(SeriesIo, RejectsCorruptInput) {
  auto bytes = kerr::encode_series(sample_series());
  EXPECT_THROW(kerr::decode_series(bytes.substr(0, bytes.size() - 3)), kerr::FormatError);
  EXPECT_THROW(kerr::decode_series(bytes + "x"), kerr::FormatError);
  EXPECT_THROW(kerr::decode_series(""), kerr::FormatError);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(kerr::decode_series(bad_magic), kerr::FormatError);
  auto bad_version = bytes;
  bad_version[12] = 9;
  EXPECT_THROW(kerr::decode_series(bad_version), kerr::FormatError);
  EXPECT_THROW(kerr::read_series("/nonexistent/file.series"), kerr::Error);
}

TEST(SeriesIo, CsvRoundTripIsLossless) {
  const auto t = sample_series();
  const auto csv = kerr::series_to_csv(t);
  EXPECT_NE(csv.find("t,value"), std::string::npos);
  expect_same(kerr::series_from_csv(csv), t);
}

// Oracle: FIPS 180-2 test vectors.
TEST(Fingerprint, Sha256Vectors) {
  EXPECT_EQ(kerr::to_hex(kerr::sha256("")),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(kerr::to_hex(kerr::sha256("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Fingerprint, HexRoundTripAndSensitivity) {
  const auto a = kerr::fingerprint({1, 1, 5, 1}, kerr::StateSpec::from_nu(kerr::StateKind::Coherent, 10));
  EXPECT_EQ(kerr::fingerprint_from_hex(kerr::to_hex(a)), a);
  const auto b = kerr::fingerprint({1, 1, 5, 1}, kerr::StateSpec::from_nu(kerr::StateKind::Coherent, 10.000000001));
  EXPECT_NE(a, b);
  EXPECT_THROW(kerr::fingerprint_from_hex("abc"), kerr::Error);
}

TEST(Table, CsvLayout) {
  kerr::Table t;
  t.columns = {"a", "b"};
  t.rows = {{1.0, 0.5}, {2.0, 1.0 / 3.0}};
  t.tag_column = "region";
  t.tags = {"x", "y"};
  t.metadata = {{"dt", "0.1"}};
  const auto csv = t.to_csv();
  EXPECT_EQ(csv.substr(0, 10), "# dt: 0.1\n");
  EXPECT_NE(csv.find("a,b,region\n"), std::string::npos);
  EXPECT_NE(csv.find("0.33333333333333331"), std::string::npos);
}

}  // namespace
