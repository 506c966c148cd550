#pragma once

// Line-based circuit files.
//
//   # comment
//   version 1
//   qubits 3
//   h 0
//   cx 0 1
//   rz 2 0.785398163397448279
//   u 1 re00 im00 re01 im01 re10 im10 re11 im11
//   measure 2
//
// Blank lines and '#' comments are ignored anywhere. `version` and `qubits`
// must come first, in that order.

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "blindrz/statevec.hpp"

namespace blindrz {

inline constexpr int kCircuitFormatVersion = 1;
/// Largest qubit count the parser accepts; simulation caps are checked later.
inline constexpr std::size_t kMaxFileQubits = 1024;

class CircuitParseError : public std::runtime_error {
 public:
  CircuitParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Unknown gate keyword. Carries the line like a parse error.
class UnknownGateError : public CircuitParseError {
 public:
  using CircuitParseError::CircuitParseError;
};


Circuit parse_circuit(std::string_view text);
Circuit read_circuit_file(const std::string& path);

std::string format_circuit(const Circuit& c);
void write_circuit_file(const std::string& path, const Circuit& c);

}  // namespace blindrz
