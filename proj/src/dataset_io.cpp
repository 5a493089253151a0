#include "rplsh/dataset_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "rplsh/csv.hpp"
#include "rplsh/errors.hpp"

namespace rplsh {
namespace {

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

bool parse_id(const std::string& text, PointId& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

DatasetFormat parse_format(std::string_view text) {
  if (text == "csv") return DatasetFormat::csv;
  if (text == "bin") return DatasetFormat::bin;
  throw InvalidParams("unknown dataset format '" + std::string(text) + "' (expected csv or bin)");
}

Dataset read_csv(std::istream& in, const CsvOptions& options) {
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto fields = split_fields(line);
    const std::size_t skip = options.id_column ? 1 : 0;
    const std::string where = "line " + std::to_string(line_no);

    if (!seen_content) {
      seen_content = true;
      double probe = 0.0;
      if (fields.size() > skip && !parse_double(fields[skip], probe)) continue;  // header
    }
    if (fields.size() <= skip) throw FormatError(where + ": no vector values");

    PointId id = options.first_id + static_cast<PointId>(data.size());
    if (options.id_column && !parse_id(fields[0], id))
      throw FormatError(where + ": invalid id '" + fields[0] + "'");
    values.clear();
    for (std::size_t f = skip; f < fields.size(); ++f) {
      double v = 0.0;
      if (!parse_double(fields[f], v))
        throw FormatError(where + ", field " + std::to_string(f + 1) + ": invalid number '" + fields[f] + "'");
      values.push_back(v);
    }
    if (!data.empty() && values.size() != data.dim())
      throw FormatError(where + ": expected " + std::to_string(data.dim()) + " values, found " +
                        std::to_string(values.size()));
    data.add(id, values);
  }
  if (in.bad()) throw IoError("read error");
  return data;
}

void write_csv(std::ostream& out, const Dataset& data, bool id_column) {
  char buf[32];
  for (std::size_t r = 0; r < data.size(); ++r) {
    bool first = true;
    if (id_column) {
      out << data.id(r);
      first = false;
    }
    for (double v : data.row(r)) {
      if (!first) out << ',';
      first = false;
      // Shortest representation that round-trips.
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

namespace le {

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_i64(std::ostream& out, std::int64_t v) { put_u64(out, static_cast<std::uint64_t>(v)); }

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void Reader::read(unsigned char* dst, std::size_t n) {
  in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n)
    throw FormatError("unexpected end of file at byte offset " + std::to_string(offset_ + in_.gcount()) +
                      " (needed " + std::to_string(n) + " bytes from offset " + std::to_string(offset_) + ")");
  offset_ += n;
}

void Reader::expect_magic(std::string_view magic) {
  std::string got(magic.size(), '\0');
  read(reinterpret_cast<unsigned char*>(got.data()), got.size());
  if (got != magic)
    throw FormatError("bad magic at byte offset 0: expected '" + std::string(magic) + "'");
}

std::uint8_t Reader::u8() {
  unsigned char b = 0;
  read(&b, 1);
  return b;
}

std::uint32_t Reader::u32() {
  unsigned char b[4];
  read(b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t Reader::u64() {
  unsigned char b[8];
  read(b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double Reader::f64() { return std::bit_cast<double>(u64()); }

void Reader::expect_end() {
  if (in_.peek() != std::char_traits<char>::eof())
    throw FormatError("trailing bytes after byte offset " + std::to_string(offset_));
}

}  // namespace le

Dataset read_binary(std::istream& in, PointId first_id) {
  le::Reader reader(in);
  reader.expect_magic("LSHV");
  const std::uint32_t count = reader.u32();
  const std::uint32_t dim = reader.u32();
  if (dim == 0 && count > 0) throw FormatError("zero dimension in header at byte offset 8");
  if (dim > (1u << 24)) throw FormatError("implausible dimension " + std::to_string(dim) + " at byte offset 8");
  Dataset data(dim);
  data.reserve(std::min<std::uint32_t>(count, 1u << 16));
  std::vector<double> row(dim);
  for (std::uint32_t r = 0; r < count; ++r) {
    for (std::uint32_t c = 0; c < dim; ++c) {
      const std::uint64_t at = reader.offset();
      row[c] = reader.f64();
      if (!std::isfinite(row[c]))
        throw FormatError("non-finite value at byte offset " + std::to_string(at) + " (row " +
                          std::to_string(r) + ")");
    }
    data.add(first_id + static_cast<PointId>(r), row);
  }
  reader.expect_end();
  return data;
}

void write_binary(std::ostream& out, const Dataset& data) {
  if (data.size() > std::numeric_limits<std::uint32_t>::max() ||
      data.dim() > std::numeric_limits<std::uint32_t>::max())
    throw InvalidParams("dataset too large for the LSHV format");
  out.write("LSHV", 4);
  le::put_u32(out, static_cast<std::uint32_t>(data.size()));
  le::put_u32(out, static_cast<std::uint32_t>(data.dim()));
  for (double v : data.values()) le::put_f64(out, v);
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format, const CsvOptions& options) {
  std::ifstream in(path, format == DatasetFormat::bin ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return format == DatasetFormat::bin ? read_binary(in, options.first_id) : read_csv(in, options);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& data, DatasetFormat format) {
  std::ofstream out(path, format == DatasetFormat::bin ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot write " + path.string());
  if (format == DatasetFormat::bin)
    write_binary(out, data);
  else
    write_csv(out, data, true);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace rplsh
