#include "blindrz/rz_protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace blindrz {

namespace {

double tag_angle(int k) { return kPi / std::ldexp(1.0, k); }

std::vector<PadRecord> pad_list(std::size_t qubit, std::size_t id) { return {PadRecord{qubit, id}}; }

void client_encrypt(Link& link, Statevector& s, std::size_t q, KeyBits k) {
  if (k.b) link.client_op(s, GateOp::z(q));
  if (k.a) link.client_op(s, GateOp::x(q));
}

void client_decrypt(Link& link, Statevector& s, std::size_t q, KeyBits k) {
  if (k.a) link.client_op(s, GateOp::x(q));
  if (k.b) link.client_op(s, GateOp::z(q));
}

Matrix2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Matrix2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }
Matrix2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }

}  // namespace

int rz_conjugation_exponent(int a, int q) { return (a ^ q) & 1; }

int decrypt_rz_pi2(Statevector& state, std::size_t q, KeyBits key, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("decrypt_rz_pi2: sign must be +1 or -1");
  if (key.a) state.apply(GateOp::x(q));
  if (key.a ^ key.b) state.apply(GateOp::z(q));
  return sign > 0 ? key.a : 3 * key.a;
}

Envelope RzServer::step(Envelope in) {
  if (!in.message.tag) throw ProtocolError("Rz server: message has no angle tag");
  const int k = *in.message.tag;
  if (k < 1 || k > 52) throw ProtocolError("Rz server: tag " + std::to_string(k) + " out of range");
  if (in.message.register_qubits.empty()) throw ProtocolError("Rz server: empty register");
  const std::size_t target = in.message.register_qubits.front();
  in.state.apply(GateOp::rz(target, tag_angle(k)));
  in.message.direction = Direction::ServerToClient;
  in.message.applied = {OpRecord{Party::Server, GateKind::Rz, {target}}};
  return in;
}

std::vector<int> tag_schedule(int M) {
  std::vector<int> tags;
  for (int m = 1; m <= M; ++m)
    for (int k = m; k >= 1; --k) tags.push_back(k);
  return tags;
}

Algo1Result algo1_rz(Statevector& state, std::size_t q, std::size_t ancilla, int m, Link& link,
                     PadSource& pads) {
  if (m < 1) throw std::invalid_argument("algo1_rz: m must be positive");
  Algo1Result r;
  bool parked = false;
  for (int k = m; k >= 1; --k) {
    const auto draw = pads.draw();
    r.keys.push_back(draw.bits);
    client_encrypt(link, state, q, draw.bits);
    Message h;
    h.tag = k;
    h.register_qubits = {q};
    state = link.round_trip(std::move(state), std::move(h), pad_list(q, draw.id)).state;
    ++r.rounds;
    client_decrypt(link, state, q, draw.bits);
    if (parked) continue;
    if (draw.bits.a == 0) {
      // Finished early: park the result so later rounds rotate |0>.
      if (k > 1) {
        link.client_op(state, GateOp::swap(q, ancilla));
        parked = true;
      }
      continue;
    }
    if (k == 1) link.client_op(state, GateOp::z(q));
  }
  if (parked) link.client_op(state, GateOp::swap(q, ancilla));
  return r;
}

SwapSchedule swap_schedule(int m, int s, int q, const RoundKeys& keys) {
  if (m < 1) throw std::invalid_argument("swap_schedule: m must be positive");
  if (keys.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("swap_schedule: need one key per round");
  SwapSchedule sc{m, s & 1, q & 1, (s & 1) != 0, {}};
  bool live = sc.swap_in;
  for (int i = 0; i < m; ++i) {
    const int k = m - i;
    SwapStep st;
    st.k = k;
    st.a = keys[static_cast<std::size_t>(i)].a & 1;
    st.live = live;
    if (live) {
      const bool done = st.a == sc.q;
      st.swap_out = done || k == 1;
      st.base_z = !done && k == 1;
      if (st.swap_out) live = false;
    }
    sc.steps.push_back(st);
  }
  return sc;
}

Eigen::Matrix4cd swap_circuit_unitary(int m, int s, int q, const RoundKeys& keys) {
  const SwapSchedule sc = swap_schedule(m, s, q, keys);
  Eigen::Matrix4cd u;
  for (std::size_t j = 0; j < 4; ++j) {
    Statevector v = Statevector::basis(2, j);
    if (sc.swap_in) v.apply(GateOp::swap(0, 1));
    for (std::size_t i = 0; i < sc.steps.size(); ++i) {
      const auto& st = sc.steps[i];
      if (keys[i].b) v.apply(GateOp::z(1));
      if (keys[i].a) v.apply(GateOp::x(1));
      v.apply(GateOp::rz(1, tag_angle(st.k)));
      if (keys[i].a) v.apply(GateOp::x(1));
      if (keys[i].b) v.apply(GateOp::z(1));
      if (st.base_z) v.apply(GateOp::z(1));
      if (st.swap_out) v.apply(GateOp::swap(0, 1));
    }
    for (std::size_t r = 0; r < 4; ++r) u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v[r];
  }
  return u;
}

Matrix2 swap_equiv_unitary(int m, int s, int q, const RoundKeys& keys) {
  const SwapSchedule sc = swap_schedule(m, s, q, keys);
  Matrix2 u = identity2();
  for (std::size_t i = 0; i < sc.steps.size(); ++i) {
    const auto& st = sc.steps[i];
    if (!st.live) continue;
    const Matrix2 x = keys[i].a ? pauli_x() : identity2();
    const Matrix2 z = keys[i].b ? pauli_z() : identity2();
    // Dec . Rz . Enc with Enc = X^a Z^b and Dec = Z^b X^a.
    const Matrix2 round = multiply(multiply(z, x), multiply(rz_matrix(tag_angle(st.k)), multiply(x, z)));
    u = multiply(round, u);
    if (st.base_z) u = multiply(pauli_z(), u);
  }
  return u;
}

BlindRzResult algo2_blind_rz(Statevector& state, std::size_t work, std::size_t ancilla, const AngleDigits& digits,
                             Link& link, PadSource& pads, const RzTransport& transport) {
  if (work == ancilla) throw std::invalid_argument("algo2_blind_rz: working qubit and ancilla coincide");
  BlindRzResult r;
  r.digits = digits;
  r.theta_hat = reconstruct(digits);

  for (int m = 1; m <= digits.M; ++m) {
    const int s = digits.s(m), q = digits.q(m);
    bool live = s == 1;
    if (live) link.client_op(state, GateOp::swap(ancilla, work));
    for (int k = m; k >= 1; --k) {
      const auto draw = pads.draw();
      client_encrypt(link, state, ancilla, draw.bits);
      transport(state, k, PadRecord{ancilla, draw.id});
      ++r.rounds;
      r.tags.push_back(k);
      client_decrypt(link, state, ancilla, draw.bits);
      if (!live) continue;
      const bool done = draw.bits.a == q;
      if (!done && k == 1) link.client_op(state, GateOp::z(ancilla));
      if (done || k == 1) {
        link.client_op(state, GateOp::swap(ancilla, work));
        live = false;
      }
    }
  }
  if (auto g = client_po_gate(digits.p_o, work)) link.client_op(state, *g);
  return r;
}

BlindRzResult algo2_blind_rz(Statevector& state, std::size_t work, std::size_t ancilla, double theta,
                             double epsilon, Link& link, PadSource& pads, Extractor extractor) {
  const AngleDigits d = digitize_eps(theta, epsilon, extractor);
  RzTransport direct = [&](Statevector& s, int tag, const PadRecord& pad) {
    Message h;
    h.tag = tag;
    h.register_qubits = {ancilla};
    s = link.round_trip(std::move(s), std::move(h), {pad}).state;
  };
  return algo2_blind_rz(state, work, ancilla, d, link, pads, direct);
}

}  // namespace blindrz
