#include "rplsh/scheme.hpp"

#include "rplsh/errors.hpp"

namespace rplsh {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::uq:
      return "uq";
    case Scheme::uq_offset:
      return "uq-offset";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "uq") return Scheme::uq;
  if (text == "uq-offset" || text == "uq_offset") return Scheme::uq_offset;
  throw InvalidParams("unknown scheme '" + std::string(text) + "' (expected uq or uq-offset)");
}

}  // namespace rplsh
