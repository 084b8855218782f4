#pragma once

#include <stdexcept>
#include <string>

namespace neuromac {

// Base class for every toolkit error. The CLI maps ConfigError (and
// subclasses) to exit code 2, everything else to 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments to an operation (negative currents, out-of-range codes, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Malformed config files, missing profiles, invalid CLI input.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// A requested operating point cannot be realized (e.g. digital frequency
// above the supply-limited maximum).
class InfeasibleOperatingPoint : public Error {
 public:
  explicit InfeasibleOperatingPoint(const std::string& msg) : Error(msg) {}
};

// Pole-zero compensation has no positive solution (sum of input
// transconductances does not exceed the load / feedback conductance).
class DegenerateCompensation : public Error {
 public:
  explicit DegenerateCompensation(const std::string& msg) : Error(msg) {}
};

// A DAC transfer with zero full-scale step; DNL/INL are undefined.
class DegenerateTransfer : public Error {
 public:
  explicit DegenerateTransfer(const std::string& msg) : Error(msg) {}
};

class UnsupportedPrecision : public DomainError {
 public:
  explicit UnsupportedPrecision(const std::string& msg) : DomainError(msg) {}
};

// Binary dataset / checkpoint parse failure; carries the byte offset.
class FormatError : public Error {
 public:
  FormatError(const std::string& msg, long long byte_offset)
      : Error(msg + " (byte offset " + std::to_string(byte_offset) + ")"),
        offset(byte_offset) {}
  long long offset;
};

class TrainingFailure : public Error {
 public:
  TrainingFailure(const std::string& msg, int epoch_index)
      : Error(msg + " (epoch " + std::to_string(epoch_index) + ")"),
        epoch(epoch_index) {}
  int epoch;
};

}  // namespace neuromac
