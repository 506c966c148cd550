#include "blindrz/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "blindrz/rng.hpp"

namespace blindrz {

namespace {

constexpr Complex kI{0.0, 1.0};

struct GateInfo {
  GateKind kind;
  std::string_view name;
  std::size_t arity;
};

constexpr std::array<GateInfo, 12> kGateTable{{
    {GateKind::X, "x", 1},
    {GateKind::Z, "z", 1},
    {GateKind::H, "h", 1},
    {GateKind::S, "s", 1},
    {GateKind::T, "t", 1},
    {GateKind::CX, "cx", 2},
    {GateKind::CZ, "cz", 2},
    {GateKind::CCX, "ccx", 3},
    {GateKind::Rz, "rz", 1},
    {GateKind::Swap, "swap", 2},
    {GateKind::Measure, "measure", 1},
    {GateKind::U, "u", 1},
}};

const GateInfo& info(GateKind kind) {
  for (const auto& g : kGateTable)
    if (g.kind == kind) return g;
  throw std::invalid_argument("unknown gate kind");
}

inline std::size_t bit(std::size_t q) { return std::size_t{1} << q; }

}  // namespace

std::string_view gate_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> parse_gate_name(std::string_view name) {
  for (const auto& g : kGateTable)
    if (g.name == name) return g.kind;
  return std::nullopt;
}

std::size_t gate_arity(GateKind kind) { return info(kind).arity; }

void validate(const GateOp& g, std::size_t n_qubits) {
  const std::string name(gate_name(g.kind));
  if (g.qubits.size() != gate_arity(g.kind))
    throw std::invalid_argument(name + ": expected " + std::to_string(gate_arity(g.kind)) +
                                " qubit(s), got " + std::to_string(g.qubits.size()));
  for (std::size_t i = 0; i < g.qubits.size(); ++i) {
    if (g.qubits[i] >= n_qubits)
      throw std::invalid_argument(name + ": qubit " + std::to_string(g.qubits[i]) +
                                  " out of range for " + std::to_string(n_qubits) + " qubits");
    for (std::size_t j = 0; j < i; ++j)
      if (g.qubits[i] == g.qubits[j]) throw std::invalid_argument(name + ": repeated qubit index");
  }
  if (g.angle.has_value() != (g.kind == GateKind::Rz))
    throw std::invalid_argument(name + ": angle must be present exactly for rz");
  if (g.angle && !std::isfinite(*g.angle)) throw std::invalid_argument("rz: angle is not finite");
  if (g.matrix.has_value() != (g.kind == GateKind::U))
    throw std::invalid_argument(name + ": matrix must be present exactly for u");
  if (g.matrix) {
    const Matrix2 p = multiply(*g.matrix, adjoint(*g.matrix));
    const double dev = std::abs(p[0] - 1.0) + std::abs(p[1]) + std::abs(p[2]) + std::abs(p[3] - 1.0);
    if (!(dev < 1e-8)) throw std::invalid_argument("u: matrix is not unitary");
  }
}

void validate(const Circuit& c) {
  if (c.n_qubits < 1 || c.n_qubits > kMaxQubits)
    throw std::out_of_range("circuit qubit count " + std::to_string(c.n_qubits) +
                            " outside [1, " + std::to_string(kMaxQubits) + "]");
  for (const auto& g : c.gates) validate(g, c.n_qubits);
}

Matrix2 rz_matrix(double theta) {
  return {std::exp(-kI * (theta / 2)), 0.0, 0.0, std::exp(kI * (theta / 2))};
}

Matrix2 single_qubit_matrix(const GateOp& g) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
    case GateKind::H: return {r, r, r, -r};
    case GateKind::S: return {1.0, 0.0, 0.0, kI};
    case GateKind::T: return {1.0, 0.0, 0.0, std::exp(kI * (kPi / 4))};
    case GateKind::Rz:
      if (!g.angle) throw std::invalid_argument("rz: missing angle");
      return rz_matrix(*g.angle);
    case GateKind::U:
      if (!g.matrix) throw std::invalid_argument("u: missing matrix");
      return *g.matrix;
    default: throw std::invalid_argument(std::string(gate_name(g.kind)) + " is not a single-qubit gate");
  }
}

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Matrix2 adjoint(const Matrix2& m) {
  return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

GateOp adjoint(const GateOp& g) {
  switch (g.kind) {
    case GateKind::S:
    case GateKind::T: return GateOp::u(g.qubits[0], adjoint(single_qubit_matrix(g)));
    case GateKind::U: return GateOp::u(g.qubits[0], adjoint(*g.matrix));
    case GateKind::Rz: return GateOp::rz(g.qubits[0], -*g.angle);
    case GateKind::Measure: throw std::invalid_argument("measure has no adjoint");
    default: return g;  // self-inverse
  }
}

// ---------------------------------------------------------------------------

Statevector Statevector::zero(std::size_t n_qubits) { return basis(n_qubits, 0); }

Statevector Statevector::basis(std::size_t n_qubits, std::size_t index) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::out_of_range("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
  std::vector<Complex> amps(bit(n_qubits), 0.0);
  if (index >= amps.size()) throw std::out_of_range("basis index out of range");
  amps[index] = 1.0;
  return Statevector(n_qubits, std::move(amps));
}

Statevector::Statevector(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits_ < 1 || n_qubits_ > kMaxQubits)
    throw std::out_of_range("qubit count " + std::to_string(n_qubits_) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
  if (amps_.size() != bit(n_qubits_))
    throw std::invalid_argument("amplitude array length " + std::to_string(amps_.size()) +
                                " != 2^" + std::to_string(n_qubits_));
}

void Statevector::check_qubit(std::size_t q) const {
  if (q >= n_qubits_) throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range");
}

void Statevector::apply(const GateOp& g) {
  validate(g, n_qubits_);
  const auto& q = g.qubits;
  switch (g.kind) {
    case GateKind::X: {
      const std::size_t m = bit(q[0]);
      for (std::size_t i = 0; i < amps_.size(); ++i)
        if (!(i & m)) std::swap(amps_[i], amps_[i | m]);
      return;
    }
    case GateKind::Z: {
      const std::size_t m = bit(q[0]);
      for (std::size_t i = 0; i < amps_.size(); ++i)
        if (i & m) amps_[i] = -amps_[i];
      return;
    }
    case GateKind::CX: apply_cx(q[0], q[1]); return;
    case GateKind::CZ: apply_cz(q[0], q[1]); return;
    case GateKind::Swap: apply_swap(q[0], q[1]); return;
    case GateKind::CCX: apply_ccx(q[0], q[1], q[2]); return;
    case GateKind::Measure:
      throw std::invalid_argument("measure requires a random source; use Statevector::measure");
    default: apply_matrix(q[0], single_qubit_matrix(g)); return;
  }
}

void Statevector::apply_matrix(std::size_t q, const Matrix2& u) {
  check_qubit(q);
  const std::size_t m = bit(q);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & m) continue;
    const Complex a0 = amps_[i];
    const Complex a1 = amps_[i | m];
    amps_[i] = u[0] * a0 + u[1] * a1;
    amps_[i | m] = u[2] * a0 + u[3] * a1;
  }
}

void Statevector::apply_cx(std::size_t c, std::size_t t) {
  const std::size_t mc = bit(c), mt = bit(t);
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if ((i & mc) && !(i & mt)) std::swap(amps_[i], amps_[i | mt]);
}

void Statevector::apply_cz(std::size_t a, std::size_t b) {
  const std::size_t m = bit(a) | bit(b);
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if ((i & m) == m) amps_[i] = -amps_[i];
}

void Statevector::apply_swap(std::size_t a, std::size_t b) {
  const std::size_t ma = bit(a), mb = bit(b);
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if ((i & ma) && !(i & mb)) std::swap(amps_[i], amps_[(i & ~ma) | mb]);
}

void Statevector::apply_ccx(std::size_t c1, std::size_t c2, std::size_t t) {
  const std::size_t mc = bit(c1) | bit(c2), mt = bit(t);
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if ((i & mc) == mc && !(i & mt)) std::swap(amps_[i], amps_[i | mt]);
}

void Statevector::scale(Complex factor) {
  for (auto& a : amps_) a *= factor;
}

double Statevector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

double Statevector::probability_one(std::size_t q) const {
  check_qubit(q);
  const std::size_t m = bit(q);
  double p = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if (i & m) p += std::norm(amps_[i]);
  return p;
}

int Statevector::measure(std::size_t q, Rng& rng) {
  const double p1 = probability_one(q);
  const int outcome = rng.uniform() < p1 ? 1 : 0;
  project(q, outcome);
  return outcome;
}

void Statevector::project(std::size_t q, int outcome) {
  check_qubit(q);
  const std::size_t m = bit(q);
  double kept = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (((i & m) != 0) == (outcome != 0))
      kept += std::norm(amps_[i]);
    else
      amps_[i] = 0.0;
  }
  if (kept < 1e-300) throw std::domain_error("project: outcome has zero probability");
  scale(1.0 / std::sqrt(kept));
}

// ---------------------------------------------------------------------------

Statevector apply(Statevector state, const GateOp& g) {
  state.apply(g);
  return state;
}

Statevector simulate(const Circuit& c, Rng& rng) {
  validate(c);
  auto s = Statevector::zero(c.n_qubits);
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::Measure)
      s.measure(g.qubits[0], rng);
    else
      s.apply(g);
  }
  return s;
}

Statevector simulate(const Circuit& c) {
  validate(c);
  auto s = Statevector::zero(c.n_qubits);
  for (const auto& g : c.gates) s.apply(g);
  return s;
}

Statevector random_state(std::size_t n_qubits, Rng& rng) {
  std::vector<Complex> amps(bit(n_qubits));
  double s = 0.0;
  for (auto& a : amps) {
    a = {rng.normal(), rng.normal()};
    s += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(s);
  return Statevector(n_qubits, std::move(amps));
}

Complex inner(const Statevector& a, const Statevector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double fidelity(const Statevector& a, const Statevector& b) { return std::norm(inner(a, b)); }

double phase_distance(const Statevector& a, const Statevector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("phase_distance: dimension mismatch");
  // Align phases first; the closed form |a|^2 + |b|^2 - 2|<a|b>| loses half the digits.
  const Complex ov = inner(b, a);
  const Complex ph = std::abs(ov) > 0 ? ov / std::abs(ov) : Complex(1.0);
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) d2 += std::norm(a[i] - ph * b[i]);
  return std::sqrt(d2);
}

bool equal_up_to_global_phase(const Statevector& a, const Statevector& b, double tol) {
  if (a.dim() != b.dim()) throw std::invalid_argument("equal_up_to_global_phase: dimension mismatch");
  return phase_distance(a, b) <= tol;
}

double max_abs_diff(const Statevector& a, const Statevector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
  const auto d = static_cast<std::size_t>(m_.rows());
  if (m_.rows() != m_.cols() || d == 0 || (d & (d - 1)) != 0)
    throw std::invalid_argument("density matrix must be square with power-of-two dimension");
}

DensityMatrix DensityMatrix::pure(const Statevector& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return DensityMatrix(Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(dim));
}

bool DensityMatrix::is_valid(double herm_tol, double trace_tol, double eig_tol) const {
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > herm_tol) return false;
  if (std::abs(m_.trace() - 1.0) > trace_tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -eig_tol;
}

DensityMatrix ensemble_density(std::span<const Statevector> states, std::span<const double> weights) {
  if (states.empty() || states.size() != weights.size())
    throw std::invalid_argument("ensemble_density: states and weights must be non-empty and equal length");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("ensemble_density: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("ensemble_density: weights must sum to 1");
  const auto d = static_cast<Eigen::Index>(states.front().dim());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (static_cast<Eigen::Index>(states[k].dim()) != d)
      throw std::invalid_argument("ensemble_density: dimension mismatch");
    rho += weights[k] * DensityMatrix::pure(states[k]).matrix();
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix reduced_density(const Statevector& state, std::span<const std::size_t> keep) {
  const std::size_t n = state.n_qubits();
  std::size_t keep_mask = 0;
  for (std::size_t q : keep) {
    if (q >= n) throw std::invalid_argument("reduced_density: qubit " + std::to_string(q) + " out of range");
    if (keep_mask & bit(q)) throw std::invalid_argument("reduced_density: repeated qubit");
    keep_mask |= bit(q);
  }
  if (keep.empty()) throw std::invalid_argument("reduced_density: empty keep set");

  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < n; ++q)
    if (!(keep_mask & bit(q))) traced.push_back(q);

  const std::size_t dk = bit(keep.size());
  const std::size_t dt = bit(traced.size());
  // Full index for (kept index r, traced index e).
  auto compose = [&](std::size_t r, std::size_t e) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (r & bit(j)) idx |= bit(keep[j]);
    for (std::size_t j = 0; j < traced.size(); ++j)
      if (e & bit(j)) idx |= bit(traced[j]);
    return idx;
  };

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t e = 0; e < dt; ++e) {
    for (std::size_t r = 0; r < dk; ++r) {
      const Complex ar = state[compose(r, e)];
      if (ar == Complex{}) continue;
      for (std::size_t c = 0; c < dk; ++c)
        rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += ar * std::conj(state[compose(c, e)]);
    }
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix reduced_density(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  std::size_t n = 0;
  while (bit(n) < rho.dim()) ++n;
  std::size_t keep_mask = 0;
  for (std::size_t q : keep) {
    if (q >= n) throw std::invalid_argument("reduced_density: qubit " + std::to_string(q) + " out of range");
    if (keep_mask & bit(q)) throw std::invalid_argument("reduced_density: repeated qubit");
    keep_mask |= bit(q);
  }
  if (keep.empty()) throw std::invalid_argument("reduced_density: empty keep set");
  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < n; ++q)
    if (!(keep_mask & bit(q))) traced.push_back(q);
  auto compose = [&](std::size_t r, std::size_t e) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (r & bit(j)) idx |= bit(keep[j]);
    for (std::size_t j = 0; j < traced.size(); ++j)
      if (e & bit(j)) idx |= bit(traced[j]);
    return idx;
  };
  const std::size_t dk = bit(keep.size());
  const auto& m = rho.matrix();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t e = 0; e < bit(traced.size()); ++e)
    for (std::size_t r = 0; r < dk; ++r)
      for (std::size_t c = 0; c < dk; ++c)
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
            m(static_cast<Eigen::Index>(compose(r, e)), static_cast<Eigen::Index>(compose(c, e)));
  return DensityMatrix(std::move(out));
}

double trace_distance(const DensityMatrix& p, const DensityMatrix& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  const Eigen::MatrixXcd diff = p.matrix() - q.matrix();
  // Symmetrize so round-off never breaks the self-adjoint solver's assumption.
  const Eigen::MatrixXcd herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace blindrz
