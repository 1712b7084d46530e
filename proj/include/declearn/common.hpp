#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace declearn {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad dimensions or mismatched lengths in inputs.
struct DimensionError : Error {
  using Error::Error;
};

// Invalid configuration or arguments.
struct ConfigError : Error {
  using Error::Error;
};

// An operation would exceed an enumeration/materialization cap.
struct CapExceededError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Derives a named sub-stream seed from a root seed, so that each component
// (data, shuffle, probe, ...) draws from its own reproducible stream.
std::uint64_t sub_seed(std::uint64_t root, std::string_view stream);

}  // namespace declearn
