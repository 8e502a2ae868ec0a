#include "jparse/model_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

namespace jparse::io {
namespace {

static_assert(std::endian::native == std::endian::little,
              "model files are written in host byte order, which must be little-endian");

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

}  // namespace

void Writer::u32(std::uint32_t v) { put(bytes_, v); }
void Writer::u64(std::uint64_t v) { put(bytes_, v); }
void Writer::f64(double v) { put(bytes_, v); }

void Writer::str(const std::string& s) {
  u32(static_cast<std::uint32_t>(s.size()));
  bytes_ += s;
}

void Writer::strings(const std::vector<std::string>& list) {
  u32(static_cast<std::uint32_t>(list.size()));
  for (const auto& s : list) str(s);
}

void Writer::matrix(const Eigen::MatrixXd& m) {
  u32(static_cast<std::uint32_t>(m.rows()));
  u32(static_cast<std::uint32_t>(m.cols()));
  bytes_.append(reinterpret_cast<const char*>(m.data()), sizeof(double) * m.size());
}

void Reader::need(std::size_t n) const {
  if (bytes_.size() - pos_ < n) throw FormatError("model file is truncated");
}

std::uint8_t Reader::u8() {
  need(1);
  return static_cast<std::uint8_t>(bytes_[pos_++]);
}

std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v;
  std::memcpy(&v, bytes_.data() + pos_, 4);
  pos_ += 4;
  return v;
}

std::uint64_t Reader::u64() {
  need(8);
  std::uint64_t v;
  std::memcpy(&v, bytes_.data() + pos_, 8);
  pos_ += 8;
  return v;
}

double Reader::f64() {
  need(8);
  double v;
  std::memcpy(&v, bytes_.data() + pos_, 8);
  pos_ += 8;
  return v;
}

std::string Reader::str() { return raw(u32()); }

std::string Reader::raw(std::size_t n) {
  need(n);
  std::string s = bytes_.substr(pos_, n);
  pos_ += n;
  return s;
}

std::vector<std::string> Reader::strings() {
  const std::uint32_t n = u32();
  std::vector<std::string> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) out.push_back(str());
  return out;
}

Eigen::MatrixXd Reader::matrix() {
  const std::uint32_t rows = u32();
  const std::uint32_t cols = u32();
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  need(n * sizeof(double));
  Eigen::MatrixXd m(rows, cols);
  std::memcpy(m.data(), bytes_.data() + pos_, n * sizeof(double));
  pos_ += n * sizeof(double);
  return m;
}

void write_container(std::ostream& out, const std::vector<Section>& sections) {
  Writer w;
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(sections.size()));
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  for (const Section& s : sections) {
    if (s.tag.size() != 4) throw std::invalid_argument("section tags have four characters");
    Writer header;
    for (char c : s.tag) header.u8(static_cast<std::uint8_t>(c));
    header.u64(s.payload.size());
    out.write(header.bytes().data(), static_cast<std::streamsize>(header.bytes().size()));
    out.write(s.payload.data(), static_cast<std::streamsize>(s.payload.size()));
  }
  if (!out) throw std::runtime_error("failed to write model");
}

void write_container(const std::filesystem::path& path, const std::vector<Section>& sections) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_container(out, sections);
}

std::vector<Section> read_container(std::istream& in) {
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(bytes);
  for (char c : kMagic) {
    if (r.u8() != static_cast<std::uint8_t>(c)) throw FormatError("not a model file");
  }
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw FormatError("unsupported model format version " + std::to_string(version) +
                      " (expected " + std::to_string(kFormatVersion) + ")");
  }
  const std::uint32_t count = r.u32();
  std::vector<Section> sections;
  for (std::uint32_t i = 0; i < count; ++i) {
    Section s;
    for (int k = 0; k < 4; ++k) s.tag += static_cast<char>(r.u8());
    s.payload = r.raw(r.u64());
    sections.push_back(std::move(s));
  }
  if (!r.done()) throw FormatError("trailing bytes after the last section");
  return sections;
}

std::vector<Section> read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_container(in);
}

}  // namespace jparse::io
