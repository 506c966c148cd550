#include "blindrz/pauli_otp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace blindrz {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex i_pow(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return kI;
    case 2: return -1.0;
    default: return -kI;
  }
}

void check_key(const Statevector& s, const PauliKey& k) {
  if (k.size() != s.n_qubits())
    throw std::invalid_argument("key covers " + std::to_string(k.size()) + " qubits, state has " +
                                std::to_string(s.n_qubits()));
}

std::uint8_t x(std::uint8_t a, std::uint8_t b) { return static_cast<std::uint8_t>(a ^ b); }
std::uint8_t m(std::uint8_t a, std::uint8_t b) { return static_cast<std::uint8_t>(a & b); }

}  // namespace

PauliKey PauliKey::from_index(std::size_t n, std::size_t index) {
  PauliKey k = zero(n);
  for (std::size_t j = 0; j < n; ++j) {
    k[j].a = static_cast<std::uint8_t>((index >> (2 * j)) & 1u);
    k[j].b = static_cast<std::uint8_t>((index >> (2 * j + 1)) & 1u);
  }
  return k;
}

void encrypt_qubit(Statevector& state, std::size_t q, KeyBits k) {
  if (k.b) state.apply(GateOp::z(q));
  if (k.a) state.apply(GateOp::x(q));
}

void decrypt_qubit(Statevector& state, std::size_t q, KeyBits k) {
  if (k.a) state.apply(GateOp::x(q));
  if (k.b) state.apply(GateOp::z(q));
}

Statevector encrypt(Statevector state, const PauliKey& key) {
  check_key(state, key);
  for (std::size_t q = 0; q < key.size(); ++q) encrypt_qubit(state, q, key[q]);
  return state;
}

Statevector decrypt(Statevector state, const PauliKey& key) {
  check_key(state, key);
  for (std::size_t q = 0; q < key.size(); ++q) decrypt_qubit(state, q, key[q]);
  return state;
}

KeyUpdate key_update(GateKind kind, const PauliKey& key, std::span<const std::size_t> qubits) {
  if (qubits.size() != gate_arity(kind))
    throw std::invalid_argument(std::string(gate_name(kind)) + ": wrong number of qubits for key update");
  for (auto q : qubits)
    if (q >= key.size()) throw std::invalid_argument("key_update: qubit outside key");

  KeyUpdate u{key, {}, 0};
  auto& k = u.new_key;
  switch (kind) {
    case GateKind::H: {
      const auto [a, b] = key[qubits[0]];
      k[qubits[0]] = {b, a};
      u.phase_exponent = 2 * m(a, b);
      break;
    }
    case GateKind::S: {
      const auto [a, b] = key[qubits[0]];
      k[qubits[0]] = {a, x(a, b)};
      u.phase_exponent = a;
      break;
    }
    case GateKind::CX: {
      const auto [a, b] = key[qubits[0]];
      const auto [c, d] = key[qubits[1]];
      k[qubits[0]] = {a, x(b, d)};
      k[qubits[1]] = {x(a, c), d};
      break;
    }
    case GateKind::CZ: {
      const auto [a, b] = key[qubits[0]];
      const auto [c, d] = key[qubits[1]];
      k[qubits[0]] = {a, x(b, c)};
      k[qubits[1]] = {c, x(a, d)};
      u.phase_exponent = 2 * m(a, c);
      break;
    }
    case GateKind::CCX: {
      const auto [a, b] = key[qubits[0]];
      const auto [c, d] = key[qubits[1]];
      const auto [e, f] = key[qubits[2]];
      k[qubits[0]] = {a, x(b, m(c, f))};
      k[qubits[1]] = {c, x(d, m(a, f))};
      k[qubits[2]] = {x(e, m(a, c)), f};
      u.phase_exponent = 2 * m(m(a, c), f);
      if (c) u.corrections.push_back(GateOp::cx(qubits[0], qubits[2]));
      if (a) u.corrections.push_back(GateOp::cx(qubits[1], qubits[2]));
      if (f) u.corrections.push_back(GateOp::cz(qubits[0], qubits[1]));
      break;
    }
    default:
      throw std::invalid_argument(std::string("key_update: unsupported gate ") + std::string(gate_name(kind)));
  }
  return u;
}

DensityMatrix pad_average(const Statevector& state) {
  const std::size_t n = state.n_qubits();
  const std::size_t keys = std::size_t{1} << (2 * n);
  const auto d = static_cast<Eigen::Index>(state.dim());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t i = 0; i < keys; ++i)
    rho += DensityMatrix::pure(encrypt(state, PauliKey::from_index(n, i))).matrix();
  return DensityMatrix(rho / static_cast<double>(keys));
}

// ---------------------------------------------------------------------------

Envelope TGadgetServer::step(Envelope in) {
  auto& reg = in.message.register_qubits;
  if (reg.size() != 2) throw ProtocolError("T gadget expects a two-qubit register");
  const std::size_t data = reg[0], anc = reg[1];
  in.state.apply(GateOp::t(data));
  in.state.apply(GateOp::cx(anc, data));
  int outcome;
  if (forced_) {
    in.state.project(data, *forced_);
    outcome = *forced_;
  } else {
    outcome = in.state.measure(data, rng_);
  }
  in.message.direction = Direction::ServerToClient;
  in.message.outcome = outcome;
  in.message.applied = {OpRecord{Party::Server, GateKind::T, {data}},
                        OpRecord{Party::Server, GateKind::CX, {anc, data}},
                        OpRecord{Party::Server, GateKind::Measure, {data}}};
  return in;
}

TDelegation t_delegate(Statevector state, std::size_t q, std::size_t ancilla, KeyBits key, Rng& rng,
                       Channel& channel, std::optional<KeyBits> ancilla_bits) {
  const KeyBits yd = ancilla_bits ? *ancilla_bits
                                  : KeyBits{static_cast<std::uint8_t>(rng.bit()), static_cast<std::uint8_t>(rng.bit())};
  const std::uint8_t y = yd.a, d = yd.b;

  // S^y Z^d |+> on the ancilla.
  state.apply(GateOp::h(ancilla));
  if (d) state.apply(GateOp::z(ancilla));
  if (y) state.apply(GateOp::s(ancilla));

  Message msg;
  msg.register_qubits = {q, ancilla};
  Envelope reply = channel.exchange(Envelope{std::move(msg), std::move(state)});
  if (!reply.message.outcome) throw ProtocolError("T gadget reply carries no outcome");
  const int mo = *reply.message.outcome;
  Statevector out = std::move(reply.state);

  // Ancilla now holds S^{a^y} X^{a^m} Z^{a(m^y)^b^d} T|psi>.
  const auto a = key.a, b = key.b;
  const auto mm = static_cast<std::uint8_t>(mo);
  if (a ^ y) out.apply(adjoint(GateOp::s(ancilla)));
  const KeyBits next{x(a, mm), static_cast<std::uint8_t>(m(a, x(mm, y)) ^ b ^ d)};

  out.apply(GateOp::swap(q, ancilla));
  if (mo) out.apply(GateOp::x(ancilla));
  return {std::move(out), next, mo, yd};
}

// ---------------------------------------------------------------------------

namespace {

void apply_update_side(Statevector& s, const KeyUpdate& u) {
  for (std::size_t q = 0; q < u.new_key.size(); ++q) encrypt_qubit(s, q, u.new_key[q]);
  for (const auto& g : u.corrections) s.apply(g);
  s.scale(i_pow(u.phase_exponent));
}

}  // namespace

RuleReport verify_rule(GateKind kind, std::size_t trials, std::uint64_t seed) {
  RuleReport r;
  r.kind = kind;
  r.trials = trials;
  Rng rng(seed, 0x7275);

  if (kind == GateKind::T) {
    for (std::size_t t = 0; t < trials; ++t) {
      const Statevector psi1 = random_state(1, rng);
      // Two qubits: data (0) and ancilla (1).
      Statevector psi(2, {psi1[0], psi1[1], 0.0, 0.0});
      Statevector want = apply(psi, GateOp::t(0));
      for (std::size_t k = 0; k < 16; ++k) {
        const KeyBits key{static_cast<std::uint8_t>(k & 1), static_cast<std::uint8_t>((k >> 1) & 1)};
        const KeyBits yd{static_cast<std::uint8_t>((k >> 2) & 1), static_cast<std::uint8_t>((k >> 3) & 1)};
        for (int branch = 0; branch < 2; ++branch) {
          Statevector in = psi;
          encrypt_qubit(in, 0, key);
          TGadgetServer server(Rng(seed, 99), branch);
          DirectChannel ch(server);
          auto res = t_delegate(in, 0, 1, key, rng, ch, yd);
          decrypt_qubit(res.state, 0, res.key);
          r.max_deviation = std::max(r.max_deviation, phase_distance(res.state, want));
          ++r.cases;
        }
      }
    }
    r.max_exact_deviation = r.max_deviation;
    return r;
  }

  const std::size_t n = gate_arity(kind);
  std::vector<std::size_t> qubits(n);
  for (std::size_t i = 0; i < n; ++i) qubits[i] = i;
  GateOp g{kind, qubits, {}, {}};

  for (std::size_t t = 0; t < trials; ++t) {
    const Statevector psi = random_state(n, rng);
    const Statevector u_psi = apply(psi, g);
    for (std::size_t ki = 0; ki < (std::size_t{1} << (2 * n)); ++ki) {
      const PauliKey key = PauliKey::from_index(n, ki);
      const KeyUpdate up = key_update(kind, key, qubits);
      const Statevector lhs = apply(encrypt(psi, key), g);
      Statevector rhs = u_psi;
      apply_update_side(rhs, up);
      r.max_exact_deviation = std::max(r.max_exact_deviation, max_abs_diff(lhs, rhs));
      r.max_deviation = std::max(r.max_deviation, phase_distance(lhs, rhs));
      ++r.cases;
    }
  }
  return r;
}

}  // namespace blindrz
