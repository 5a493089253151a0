#pragma once

#include <string>
#include <string_view>

namespace rplsh {

/// Quantizer applied to each projected coordinate.
enum class Scheme {
  uq,         ///< floor(x / w)
  uq_offset,  ///< floor((x + q) / w), q ~ uniform[0, w)
};

std::string_view to_string(Scheme scheme);

/// Accepts "uq" and "uq-offset" (also "uq_offset"). Throws InvalidParams otherwise.
Scheme parse_scheme(std::string_view text);

}  // namespace rplsh
