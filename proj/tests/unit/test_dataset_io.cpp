#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "rplsh/dataset_io.hpp"
#include "rplsh/errors.hpp"
#include "rplsh/evaluation.hpp"

using namespace rplsh;

namespace {

std::string error_of(const std::string& text, CsvOptions opts = {}) {
  std::istringstream in(text);
  try {
    read_csv(in, opts);
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("dataset_io") {

TEST_CASE("csv without ids numbers rows from first_id") {
  std::istringstream in("# comment\n1, 2, 3\n\n4,5,6\n");
  CsvOptions opts;
  opts.first_id = 10;
  const auto d = read_csv(in, opts);
  REQUIRE(d.size() == 2);
  CHECK(d.dim() == 3);
  CHECK(d.id(0) == 10);
  CHECK(d.id(1) == 11);
  CHECK(d.row(1)[2] == 6.0);
}

TEST_CASE("csv header line is skipped and ids are read") {
  std::istringstream in("id,x,y\n7,0.5,-1e-3\n-2,1,2\n");
  CsvOptions opts;
  opts.id_column = true;
  const auto d = read_csv(in, opts);
  REQUIRE(d.size() == 2);
  CHECK(d.id(0) == 7);
  CHECK(d.id(1) == -2);
  CHECK(d.row(0)[1] == -1e-3);
}

TEST_CASE("csv errors name the line") {
  CHECK(error_of("1,2\n3,x\n").find("line 2") != std::string::npos);
  CHECK(error_of("1,2\n3,4,5\n").find("line 2") != std::string::npos);
  CsvOptions ids;
  ids.id_column = true;
  CHECK(error_of("1,2\n2.5,4\n", ids).find("line 2") != std::string::npos);
  CHECK(error_of("a,b\nc,d\n").find("line 2") != std::string::npos);
  CHECK(error_of("1,nan\n").find("line 1") != std::string::npos);
}

TEST_CASE("csv and binary round trips are exact") {
  const auto s = make_synthetic(50, 7, 3, 0.5, 2, 1);
  std::stringstream csv;
  write_csv(csv, s.data, true);
  CsvOptions opts;
  opts.id_column = true;
  const auto back = read_csv(csv, opts);
  CHECK(std::equal(back.values().begin(), back.values().end(), s.data.values().begin()));
  CHECK(std::equal(back.ids().begin(), back.ids().end(), s.data.ids().begin()));

  std::stringstream bin;
  write_binary(bin, s.data);
  const auto b = read_binary(bin);
  CHECK(std::equal(b.values().begin(), b.values().end(), s.data.values().begin()));
  CHECK(b.id(3) == 3);
}

TEST_CASE("binary errors name the byte offset") {
  const auto s = make_synthetic(4, 3, 1, 0.5, 2, 1);
  std::stringstream bin;
  write_binary(bin, s.data);
  const std::string bytes = bin.str();
  auto message = [](const std::string& b) -> std::string {
    std::istringstream in(b);
    try {
      read_binary(in);
    } catch (const FormatError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("XXXX" + bytes.substr(4)).find("byte offset 0") != std::string::npos);
  CHECK(message(bytes.substr(0, 30)).find("byte offset") != std::string::npos);
  CHECK(message(bytes + "z").find("byte offset " + std::to_string(bytes.size())) != std::string::npos);
  std::string nan_value = bytes;
  for (int i = 0; i < 8; ++i) nan_value[12 + i] = static_cast<char>(0xff);
  CHECK(message(nan_value).find("byte offset 12") != std::string::npos);
}

TEST_CASE("files and formats") {
  CHECK(parse_format("csv") == DatasetFormat::csv);
  CHECK(parse_format("bin") == DatasetFormat::bin);
  CHECK_THROWS_AS(parse_format("json"), InvalidParams);
  CHECK_THROWS_AS(load_dataset("/nonexistent/file.csv", DatasetFormat::csv), IoError);
  const auto path = std::filesystem::temp_directory_path() / "rplsh_io_test.bin";
  const auto s = make_synthetic(20, 4, 2, 0.5, 2, 1);
  save_dataset(path, s.data, DatasetFormat::bin);
  const auto back = load_dataset(path, DatasetFormat::bin);
  CHECK(back.size() == 20);
  std::filesystem::remove(path);
}

}
