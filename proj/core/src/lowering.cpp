#include <cmath>

#include "blindrz/rng.hpp"
#include "blindrz/ubqc.hpp"

namespace blindrz {

bool is_client_gate(GateKind k) {
  return k == GateKind::X || k == GateKind::Z || k == GateKind::Swap || k == GateKind::Measure;
}

bool is_server_gate(GateKind k) { return k == GateKind::H || k == GateKind::CZ || k == GateKind::Rz; }

bool is_lowered(const Circuit& c) {
  for (const auto& g : c.gates)
    if (!is_client_gate(g.kind) && !is_server_gate(g.kind)) return false;
  return true;
}

EulerZXZ euler_zxz(const Matrix2& u) {
  const Complex det = u[0] * u[3] - u[1] * u[2];
  const Complex root = std::sqrt(det);
  const Complex v00 = u[0] / root, v01 = u[1] / root;
  const double c = std::abs(v00), s = std::abs(v01);
  const double sigma = c > 1e-14 ? -std::arg(v00) : 0.0;
  const double delta = s > 1e-14 ? -std::arg(Complex{0.0, 1.0} * v01) : 0.0;
  EulerZXZ e;
  e.beta = 2.0 * std::atan2(s, c);
  e.alpha = sigma + delta;
  e.gamma = sigma - delta;
  e.phase = std::arg(root);
  return e;
}

namespace {

constexpr double kZeroAngle = 1e-15;

class Emitter {
 public:
  explicit Emitter(Circuit& out) : out_(out) {}

  void rz(std::size_t q, double t) {
    if (std::abs(t) > kZeroAngle) out_.gates.push_back(GateOp::rz(q, t));
  }
  void h(std::size_t q) { out_.gates.push_back(GateOp::h(q)); }
  void cz(std::size_t a, std::size_t b) { out_.gates.push_back(GateOp::cz(a, b)); }
  void cx(std::size_t c, std::size_t t) {
    h(t);
    cz(c, t);
    h(t);
  }
  void raw(const GateOp& g) { out_.gates.push_back(g); }

  void unitary(std::size_t q, const Matrix2& m) {
    const EulerZXZ e = euler_zxz(m);
    if (std::abs(e.beta) <= kZeroAngle) {
      rz(q, e.alpha + e.gamma);
      return;
    }
    rz(q, e.gamma);
    h(q);
    rz(q, e.beta);
    h(q);
    rz(q, e.alpha);
  }

  void ccx(std::size_t a, std::size_t b, std::size_t c) {
    const double t = kPi / 4;
    h(c);
    cx(b, c);
    rz(c, -t);
    cx(a, c);
    rz(c, t);
    cx(b, c);
    rz(c, -t);
    cx(a, c);
    rz(b, t);
    rz(c, t);
    h(c);
    cx(a, b);
    rz(a, t);
    rz(b, -t);
    cx(a, b);
  }

 private:
  Circuit& out_;
};

}  // namespace

Circuit lower_circuit(const Circuit& c) {
  validate(c);
  Circuit out{c.n_qubits, {}};
  Emitter e(out);
  for (const auto& g : c.gates) {
    const auto& q = g.qubits;
    switch (g.kind) {
      case GateKind::X:
      case GateKind::Z:
      case GateKind::Swap:
      case GateKind::Measure:
      case GateKind::H:
      case GateKind::CZ: e.raw(g); break;
      case GateKind::Rz: e.rz(q[0], *g.angle); break;
      case GateKind::S: e.rz(q[0], kPi / 2); break;
      case GateKind::T: e.rz(q[0], kPi / 4); break;
      case GateKind::CX: e.cx(q[0], q[1]); break;
      case GateKind::CCX: e.ccx(q[0], q[1], q[2]); break;
      case GateKind::U: e.unitary(q[0], *g.matrix); break;
    }
  }
  return out;
}

std::optional<double> lowering_fidelity(const Circuit& original, const Circuit& lowered, std::uint64_t seed) {
  if (original.n_qubits != lowered.n_qubits)
    throw std::invalid_argument("lowering_fidelity: qubit counts differ");
  for (const auto* c : {&original, &lowered})
    for (const auto& g : c->gates)
      if (g.kind == GateKind::Measure) return std::nullopt;
  Rng rng(seed, 0x6c6f);
  Statevector a = random_state(original.n_qubits, rng);
  Statevector b = a;
  for (const auto& g : original.gates) a.apply(g);
  for (const auto& g : lowered.gates) b.apply(g);
  return fidelity(a, b);
}

}  // namespace blindrz
