#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace tasksim {

/// Virtual nanoseconds.
using Ticks = std::int64_t;
using TaskId = std::uint32_t;
using ThreadIndex = std::uint32_t;
/// Higher is more urgent. Signed so a fair yield can always go one below the current minimum.
using Priority = std::int64_t;

inline constexpr Priority kMinPriority = std::numeric_limits<Priority>::min();

class Error : public std::runtime_error {
public:
   using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
public:
   using Error::Error;
};

class InvalidGraph : public Error {
public:
   using Error::Error;
};

class CyclicDependency : public Error {
public:
   using Error::Error;
};

class ConfigError : public Error {
public:
   using Error::Error;
};

class TraceMismatch : public Error {
public:
   using Error::Error;
};

class ParseError : public Error {
public:
   using Error::Error;
};

} // namespace tasksim
