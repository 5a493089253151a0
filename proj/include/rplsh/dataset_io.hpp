#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "rplsh/projections.hpp"

namespace rplsh {

enum class DatasetFormat { csv, bin };

DatasetFormat parse_format(std::string_view text);

struct CsvOptions {
  bool id_column = false;  ///< first field of each row is an integer id
  PointId first_id = 0;    ///< ids assigned to rows when there is no id column
};

/// One vector per line, comma separated. Blank lines and lines starting with '#' are ignored,
/// and a first line whose leading field is not numeric is taken as a header. Errors name the
/// 1-based line number.
Dataset read_csv(std::istream& in, const CsvOptions& options = {});
void write_csv(std::ostream& out, const Dataset& data, bool id_column = true);

/// Binary layout, little-endian:
///   "LSHV" | u32 count | u32 dimension | count * dimension IEEE-754 f64, row-major.
/// Rows get ids first_id, first_id + 1, ... Errors name the byte offset.
Dataset read_binary(std::istream& in, PointId first_id = 0);
void write_binary(std::ostream& out, const Dataset& data);

/// Dispatch on format; throws IoError when the file cannot be opened.
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format, const CsvOptions& options = {});
void save_dataset(const std::filesystem::path& path, const Dataset& data, DatasetFormat format);

/// Little-endian primitives shared by the binary formats.
namespace le {
void put_u32(std::ostream& out, std::uint32_t v);
void put_u64(std::ostream& out, std::uint64_t v);
void put_i64(std::ostream& out, std::int64_t v);
void put_f64(std::ostream& out, double v);

/// Reads from a stream and tracks the byte offset for error messages.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  void expect_magic(std::string_view magic);
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64();
  std::uint64_t offset() const { return offset_; }
  /// Throws FormatError if bytes remain.
  void expect_end();

 private:
  void read(unsigned char* dst, std::size_t n);
  std::istream& in_;
  std::uint64_t offset_ = 0;
};
}  // namespace le

}  // namespace rplsh
