#include "blindrz/angle_codec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace blindrz {

int precision_bits(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < kPi))
    throw std::domain_error("epsilon must lie in (0, pi), got " + std::to_string(epsilon));
  // The slack keeps exact powers of two (epsilon = pi/2^k) at k.
  const int M = static_cast<int>(std::ceil(std::log2(kPi / epsilon) - 1e-9));
  return M < 1 ? 1 : M;
}

AngleDigits digitize(double theta, int M, Extractor extractor) {
  if (!std::isfinite(theta)) throw std::domain_error("digitize: theta is not finite");
  if (M < 1 || M > 52) throw std::domain_error("digitize: M must lie in [1, 52]");

  AngleDigits d;
  d.theta = theta;
  d.M = M;
  d.epsilon = kPi / std::ldexp(1.0, M);
  d.digits.assign(static_cast<std::size_t>(M), 0);

  const double turns = theta / kPi;
  d.p_o = static_cast<std::int64_t>(std::floor(turns));
  const double frac = turns - static_cast<double>(d.p_o);  // [0, 1)
  const std::int64_t full = std::int64_t{1} << M;

  if (extractor == Extractor::Floor) {
    std::int64_t N = static_cast<std::int64_t>(std::floor(frac * static_cast<double>(full) + 1e-9));
    if (N >= full) {
      N -= full;
      ++d.p_o;
    }
    for (int m = 1; m <= M; ++m) d.digits[static_cast<std::size_t>(m - 1)] = static_cast<int>((N >> (M - m)) & 1);
    return d;
  }

  // Non-adjacent form of N, least significant digit first, weight 2^j <-> m = M - j.
  std::int64_t N = static_cast<std::int64_t>(std::llround(frac * static_cast<double>(full)));
  for (int j = 0; N != 0; ++j) {
    int digit = 0;
    if (N & 1) {
      digit = 2 - static_cast<int>(N & 3);  // +1 or -1
      N -= digit;
    }
    N >>= 1;
    if (j < M)
      d.digits[static_cast<std::size_t>(M - 1 - j)] = digit;
    else
      d.p_o += static_cast<std::int64_t>(digit) << (j - M);
  }
  return d;
}

AngleDigits digitize_eps(double theta, double epsilon, Extractor extractor) {
  AngleDigits d = digitize(theta, precision_bits(epsilon), extractor);
  d.epsilon = epsilon;
  return d;
}

double fraction(const AngleDigits& d) {
  double s = 0.0;
  for (int m = 1; m <= d.M; ++m) s += d.p(m) * kPi / std::ldexp(1.0, m);
  return s;
}

double reconstruct(const AngleDigits& d) { return static_cast<double>(d.p_o) * kPi + fraction(d); }

double impurity(const AngleDigits& d) {
  double s = 0.0;
  for (int m = 1; m <= d.M; ++m) s += (1 - d.p(m)) * kPi / std::ldexp(1.0, m);
  return s;
}

double upsilon(std::int64_t p_o, int M) {
  if (M < 1) throw std::domain_error("upsilon: M must be positive");
  return static_cast<double>(p_o) * kPi + kPi - kPi / std::ldexp(1.0, M);
}

std::optional<GateOp> client_po_gate(std::int64_t p_o, std::size_t qubit) {
  if (p_o % 2 != 0) return GateOp::z(qubit);
  return std::nullopt;
}

}  // namespace blindrz
