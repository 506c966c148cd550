#pragma once

// Dense statevector and density-matrix simulation.
//
// Qubit ordering is little-endian: qubit 0 is the least significant bit of
// the amplitude index. Gate conventions:
//   Rz(t) = diag(e^{-it/2}, e^{it/2}),  S = diag(1, i),  T = diag(1, e^{i pi/4}).

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace blindrz {

class Rng;

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 12;
inline constexpr double kPi = 3.14159265358979323846;

enum class GateKind { X, Z, H, S, T, CX, CZ, CCX, Rz, Swap, Measure, U };

std::string_view gate_name(GateKind kind);
std::optional<GateKind> parse_gate_name(std::string_view name);
std::size_t gate_arity(GateKind kind);

/// Row-major 2x2 complex matrix.
using Matrix2 = std::array<Complex, 4>;

struct GateOp {
  GateKind kind = GateKind::X;
  std::vector<std::size_t> qubits;
  /// Present iff kind == Rz.
  std::optional<double> angle;
  /// Present iff kind == U (arbitrary single-qubit unitary).
  std::optional<Matrix2> matrix;

  static GateOp x(std::size_t q) { return {GateKind::X, {q}, {}, {}}; }
  static GateOp z(std::size_t q) { return {GateKind::Z, {q}, {}, {}}; }
  static GateOp h(std::size_t q) { return {GateKind::H, {q}, {}, {}}; }
  static GateOp s(std::size_t q) { return {GateKind::S, {q}, {}, {}}; }
  static GateOp t(std::size_t q) { return {GateKind::T, {q}, {}, {}}; }
  static GateOp rz(std::size_t q, double theta) { return {GateKind::Rz, {q}, theta, {}}; }
  static GateOp u(std::size_t q, const Matrix2& m) { return {GateKind::U, {q}, {}, m}; }
  static GateOp cx(std::size_t c, std::size_t t) { return {GateKind::CX, {c, t}, {}, {}}; }
  static GateOp cz(std::size_t a, std::size_t b) { return {GateKind::CZ, {a, b}, {}, {}}; }
  static GateOp swap(std::size_t a, std::size_t b) { return {GateKind::Swap, {a, b}, {}, {}}; }
  static GateOp ccx(std::size_t c1, std::size_t c2, std::size_t t) {
    return {GateKind::CCX, {c1, c2, t}, {}, {}};
  }
  static GateOp measure(std::size_t q) { return {GateKind::Measure, {q}, {}, {}}; }

  bool operator==(const GateOp&) const = default;
};

/// Throws std::invalid_argument on arity, index, or parameter mismatch.
void validate(const GateOp& g, std::size_t n_qubits);

struct Circuit {
  std::size_t n_qubits = 0;
  std::vector<GateOp> gates;

  bool operator==(const Circuit&) const = default;
};

void validate(const Circuit& c);

Matrix2 rz_matrix(double theta);
/// Matrix of a single-qubit gate (X, Z, H, S, T, Rz, U).
Matrix2 single_qubit_matrix(const GateOp& g);
Matrix2 multiply(const Matrix2& a, const Matrix2& b);
Matrix2 adjoint(const Matrix2& m);

/// Exact inverse gate; S and T invert to explicit U matrices.
GateOp adjoint(const GateOp& g);

class Statevector {
 public:
  /// |0...0> on n qubits; throws std::out_of_range unless 1 <= n <= kMaxQubits.
  static Statevector zero(std::size_t n_qubits);
  static Statevector basis(std::size_t n_qubits, std::size_t index);

  /// Takes ownership of a 2^n amplitude array.
  Statevector(std::size_t n_qubits, std::vector<Complex> amplitudes);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  void apply(const GateOp& g);
  void apply_matrix(std::size_t q, const Matrix2& m);
  void scale(Complex factor);

  double norm() const;
  double probability_one(std::size_t q) const;

  /// Computational-basis measurement; collapses and renormalizes.
  int measure(std::size_t q, Rng& rng);
  /// Postselects qubit q on `outcome`; throws if that branch has no weight.
  void project(std::size_t q, int outcome);

  bool operator==(const Statevector&) const = default;

 private:
  void check_qubit(std::size_t q) const;
  void apply_cx(std::size_t c, std::size_t t);
  void apply_cz(std::size_t a, std::size_t b);
  void apply_swap(std::size_t a, std::size_t b);
  void apply_ccx(std::size_t c1, std::size_t c2, std::size_t t);

  std::size_t n_qubits_;
  std::vector<Complex> amps_;
};

inline Statevector new_state(std::size_t n_qubits) { return Statevector::zero(n_qubits); }

/// Value-semantics gate application.
Statevector apply(Statevector state, const GateOp& g);
/// Applies every unitary gate in order; Measure gates sample from `rng`.
Statevector simulate(const Circuit& c, Rng& rng);
/// Applies a circuit that contains no Measure gates.
Statevector simulate(const Circuit& c);

/// Haar-ish random state (normalized complex Gaussian amplitudes).
Statevector random_state(std::size_t n_qubits, Rng& rng);

Complex inner(const Statevector& a, const Statevector& b);
double fidelity(const Statevector& a, const Statevector& b);
/// min over phi of ||a - e^{i phi} b||.
double phase_distance(const Statevector& a, const Statevector& b);
bool equal_up_to_global_phase(const Statevector& a, const Statevector& b, double tol);
/// max_i |a_i - b_i|, no phase freedom.
double max_abs_diff(const Statevector& a, const Statevector& b);

class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  static DensityMatrix pure(const Statevector& s);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  Complex trace() const { return m_.trace(); }

  /// Hermitian, unit trace, and PSD within the given tolerances.
  bool is_valid(double herm_tol = 1e-10, double trace_tol = 1e-10, double eig_tol = 1e-9) const;

 private:
  Eigen::MatrixXcd m_;
};

DensityMatrix ensemble_density(std::span<const Statevector> states, std::span<const double> weights);

/// Partial trace onto `keep`; keep[0] becomes the least significant bit of the result.
DensityMatrix reduced_density(const Statevector& state, std::span<const std::size_t> keep);
/// Partial trace of a density matrix over its own qubits (same ordering rule).
DensityMatrix reduced_density(const DensityMatrix& rho, std::span<const std::size_t> keep);

/// 1/2 ||p - q||_1 from the eigenvalues of p - q.
double trace_distance(const DensityMatrix& p, const DensityMatrix& q);

}  // namespace blindrz
