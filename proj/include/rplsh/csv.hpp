#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rplsh {

/// Real number with 10 significant digits ("%.10g"), the format of every CSV we emit.
std::string format_real(double x);

/// Splits on `sep`, trimming ASCII whitespace around each field.
std::vector<std::string> split_fields(std::string_view line, char sep = ',');

}  // namespace rplsh
