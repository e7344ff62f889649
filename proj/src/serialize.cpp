#include "marco/serialize.hpp"

#include <cstring>

namespace marco {

namespace {
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
}

Digest& Digest::bytes(const void* p, std::size_t n) {
  const auto* b = static_cast<const unsigned char*>(p);
  for (std::size_t i = 0; i < n; ++i) {
    h_ ^= b[i];
    h_ *= kFnvPrime;
  }
  return *this;
}

Digest& Digest::u64(std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  return bytes(b, 8);
}

Digest& Digest::f64(double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  return u64(bits);
}

Digest& Digest::str(const std::string& s) {
  u64(s.size());
  return bytes(s.data(), s.size());
}

std::string Digest::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  std::uint64_t v = h_;
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

BinWriter::BinWriter(const std::string& path)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) throw ParseError("cannot open for writing: " + path);
}

void BinWriter::magic(const std::string& tag) {
  out_.write(tag.data(), static_cast<std::streamsize>(tag.size()));
  out_.put('\n');
}

void BinWriter::u8(std::uint8_t v) {
  out_.put(static_cast<char>(v));
}

void BinWriter::u32(std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out_.write(b, 4);
}

void BinWriter::u64(std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out_.write(b, 8);
}

void BinWriter::i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

void BinWriter::f64(double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  u64(bits);
}

void BinWriter::str(const std::string& s) {
  u32(static_cast<std::uint32_t>(s.size()));
  out_.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void BinWriter::tensor(const Tensor2& t) {
  u32(static_cast<std::uint32_t>(t.rows()));
  u32(static_cast<std::uint32_t>(t.cols()));
  for (double v : t.data()) f64(v);
}

void BinWriter::close() {
  out_.close();
  if (!out_) throw ParseError("write failed: " + path_);
}

BinReader::BinReader(const std::string& path)
    : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw PipelineError("missing artifact: " + path);
}

void BinReader::read_raw(void* p, std::size_t n) {
  in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n)
    throw ParseError("truncated file: " + path_);
}

void BinReader::expect_magic(const std::string& tag) {
  std::string got(tag.size(), '\0');
  read_raw(got.data(), got.size());
  char nl = 0;
  read_raw(&nl, 1);
  if (got != tag || nl != '\n')
    throw ParseError("bad magic in " + path_ + ": expected '" + tag + "'");
}

std::uint8_t BinReader::u8() {
  unsigned char b;
  read_raw(&b, 1);
  return b;
}

std::uint32_t BinReader::u32() {
  unsigned char b[4];
  read_raw(b, 4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t BinReader::u64() {
  unsigned char b[8];
  read_raw(b, 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::int64_t BinReader::i64() { return static_cast<std::int64_t>(u64()); }

double BinReader::f64() {
  std::uint64_t bits = u64();
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

std::string BinReader::str() {
  std::uint32_t n = u32();
  std::string s(n, '\0');
  if (n > 0) read_raw(s.data(), n);
  return s;
}

Tensor2 BinReader::tensor() {
  int rows = static_cast<int>(u32());
  int cols = static_cast<int>(u32());
  Tensor2 t(rows, cols);
  for (auto& v : t.data()) v = f64();
  return t;
}

std::uint64_t file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PipelineError("missing artifact: " + path);
  Digest d;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    d.bytes(buf, static_cast<std::size_t>(in.gcount()));
    if (!in) break;
  }
  return d.value();
}

}  // namespace marco
