#pragma once

#include <stdexcept>
#include <string>

namespace rplsh {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("vector has no nonzero entry and cannot be normalized") {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)) {}
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Approximation factor c exceeds sqrt(1 / (1 - rho0)).
class CExceedsBound : public InvalidParams {
 public:
  using InvalidParams::InvalidParams;
};

/// Gap is undefined because a collision probability is 0 or 1.
class DegenerateGap : public InvalidParams {
 public:
  using InvalidParams::InvalidParams;
};

class EmptyDataset : public Error {
 public:
  EmptyDataset() : Error("dataset is empty") {}
};

class TTooLarge : public Error {
 public:
  using Error::Error;
};

/// Malformed dataset, snapshot or cache file. The message names the offending row or byte offset.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rplsh
