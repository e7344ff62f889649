#ifndef MARCO_SERIALIZE_HPP_
#define MARCO_SERIALIZE_HPP_

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "marco/errors.hpp"
#include "marco/tensor.hpp"

namespace marco {

// Streaming FNV-1a (64-bit) over typed fields; doubles are hashed by bit
// pattern, so equal digests mean bit-identical numeric content.
class Digest {
 public:
  Digest& bytes(const void* p, std::size_t n);
  Digest& u64(std::uint64_t v);
  Digest& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  Digest& f64(double v);
  Digest& str(const std::string& s);
  std::uint64_t value() const { return h_; }
  std::string hex() const;

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

// Little-endian binary writer used by every MARCO-* checkpoint format.
class BinWriter {
 public:
  explicit BinWriter(const std::string& path);
  void magic(const std::string& tag);  // raw tag bytes + '\n'
  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v);
  void f64(double v);
  void str(const std::string& s);  // u32 length + bytes
  void tensor(const Tensor2& t);   // u32 rows, u32 cols, f64 data
  void close();

 private:
  std::ofstream out_;
  std::string path_;
};

class BinReader {
 public:
  explicit BinReader(const std::string& path);
  void expect_magic(const std::string& tag);
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64();
  double f64();
  std::string str();
  Tensor2 tensor();

 private:
  void read_raw(void* p, std::size_t n);
  std::ifstream in_;
  std::string path_;
};

// Digest of a file's full contents.
std::uint64_t file_digest(const std::string& path);

}  // namespace marco

#endif  // MARCO_SERIALIZE_HPP_
