#pragma once

#include <stdexcept>
#include <string>

namespace cobandit {

struct DegenerateUpdate : std::runtime_error {
  explicit DegenerateUpdate(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct TooFewPoints : std::invalid_argument {
  explicit TooFewPoints(const std::string& what) : std::invalid_argument(what) {}
};

struct ZeroColumn : std::runtime_error {
  explicit ZeroColumn(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyPool : std::invalid_argument {
  explicit EmptyPool(const std::string& what) : std::invalid_argument(what) {}
};

struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cobandit
