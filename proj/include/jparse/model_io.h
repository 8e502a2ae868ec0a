#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace jparse::io {

inline constexpr char kMagic[8] = {'J', 'S', 'P', 'M', 'O', 'D', 'E', 'L'};
inline constexpr std::uint32_t kFormatVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Little-endian binary encoder into a byte string.
class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void str(const std::string& s);
  void strings(const std::vector<std::string>& list);
  void matrix(const Eigen::MatrixXd& m);  // rows, cols, column-major values

  const std::string& bytes() const { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  std::string str();
  std::string raw(std::size_t n);
  std::vector<std::string> strings();
  Eigen::MatrixXd matrix();
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const;

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

struct Section {
  std::string tag;  // exactly four characters
  std::string payload;
};

// magic, u32 version, u32 section count, then per section: 4-byte tag,
// u64 length, payload.
void write_container(std::ostream& out, const std::vector<Section>& sections);
void write_container(const std::filesystem::path& path, const std::vector<Section>& sections);
std::vector<Section> read_container(std::istream& in);
std::vector<Section> read_container(const std::filesystem::path& path);

}  // namespace jparse::io
