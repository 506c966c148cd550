#pragma once

// Signed-digit decomposition of rotation angles at precision epsilon.
//
//   theta ~ p_o*pi + sum_{m=1..M} p_m * pi / 2^m,   p_m in {-1, 0, 1}
//
// plus the impurity eta = sum (1 - p_m) pi / 2^m and the delegation angle
// upsilon = theta_hat + eta = p_o*pi + pi - pi/2^M, which does not depend on
// the digits.

#include <cstdint>
#include <optional>
#include <vector>

#include "blindrz/statevec.hpp"

namespace blindrz {

enum class Extractor {
  /// Truncated binary expansion; digits in {0, 1}.
  Floor,
  /// Rounded, non-adjacent signed-digit form; digits in {-1, 0, 1}.
  Balanced,
};

struct AngleDigits {
  double theta = 0.0;
  double epsilon = 0.0;
  int M = 0;
  std::int64_t p_o = 0;
  /// digits[m-1] = p_m.
  std::vector<int> digits;

  int p(int m) const { return digits.at(static_cast<std::size_t>(m - 1)); }
  /// 1 iff p_m != 0.
  int s(int m) const { return p(m) != 0 ? 1 : 0; }
  /// 1 iff p_m == -1.
  int q(int m) const { return p(m) < 0 ? 1 : 0; }
};

/// M = ceil(log2(pi / epsilon)); throws std::domain_error unless 0 < epsilon < pi.
int precision_bits(double epsilon);

AngleDigits digitize(double theta, int M, Extractor extractor = Extractor::Floor);
AngleDigits digitize_eps(double theta, double epsilon, Extractor extractor = Extractor::Floor);

/// p_o*pi + sum p_m pi/2^m.
double reconstruct(const AngleDigits& d);
/// sum p_m pi/2^m only.
double fraction(const AngleDigits& d);
double impurity(const AngleDigits& d);
double upsilon(std::int64_t p_o, int M);

/// Z for odd p_o (Rz(p_o*pi) up to phase), nothing otherwise.
std::optional<GateOp> client_po_gate(std::int64_t p_o, std::size_t qubit = 0);

}  // namespace blindrz
