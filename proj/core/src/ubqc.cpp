#include "blindrz/ubqc.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "blindrz/pauli_otp.hpp"
#include "blindrz/rz_protocol.hpp"

namespace blindrz {

ResourceSet ResourceSet::make(double epsilon, std::int64_t p_o) {
  const int M = precision_bits(epsilon);
  return {epsilon, M, ::blindrz::upsilon(p_o, M)};
}

// ---------------------------------------------------------------------------
// Server

Envelope UbqcServer::step(Envelope in) {
  auto& msg = in.message;
  const auto& reg = msg.register_qubits;
  if (reg.size() != kSlots) throw ProtocolError("server expects the four-slot block");

  std::vector<OpRecord> applied;
  if (msg.block_start) {
    if (cursor_ != expected_.size()) throw ProtocolError("new block before the previous schedule finished");
    expected_.clear();
    cursor_ = 0;
    if (msg.tag) expected_ = tag_schedule(M_);
    in.state.apply(GateOp::h(reg[0]));
    in.state.apply(GateOp::cz(reg[1], reg[2]));
    applied.push_back({Party::Server, GateKind::H, {reg[0]}});
    applied.push_back({Party::Server, GateKind::CZ, {reg[1], reg[2]}});
  } else if (!msg.tag) {
    throw ProtocolError("message is neither a block start nor tagged");
  }

  if (msg.tag) {
    if (cursor_ >= expected_.size() || expected_[cursor_] != *msg.tag)
      throw ProtocolError("tag " + std::to_string(*msg.tag) + " is off the schedule");
    ++cursor_;
    in.state.apply(GateOp::rz(reg[3], kPi / std::ldexp(1.0, *msg.tag)));
    applied.push_back({Party::Server, GateKind::Rz, {reg[3]}});
  }

  msg.direction = Direction::ServerToClient;
  msg.applied = std::move(applied);
  return in;
}

// ---------------------------------------------------------------------------
// Client

Client::Client(Layout layout, Link& link, PadSource& pads, Rng& measure_rng, Extractor extractor, double epsilon)
    : layout_(layout), link_(link), pads_(pads), measure_rng_(measure_rng), extractor_(extractor), epsilon_(epsilon) {}

std::vector<PadRecord> Client::pad_slots_1_3(Statevector& state, std::vector<KeyBits>& keys) {
  std::vector<PadRecord> records;
  keys.clear();
  for (std::size_t i = 1; i <= 3; ++i) {
    const auto d = pads_.draw();
    const std::size_t q = layout_.slot(i);
    if (d.bits.b) link_.client_op(state, GateOp::z(q));
    if (d.bits.a) link_.client_op(state, GateOp::x(q));
    keys.push_back(d.bits);
    records.push_back({q, d.id});
  }
  return records;
}

void Client::decrypt_slots_1_3(Statevector& state, const std::vector<KeyBits>& keys) {
  PauliKey k{keys};
  const std::size_t h_wire[] = {0};
  const std::size_t cz_wires[] = {1, 2};
  k = key_update(GateKind::H, k, h_wire).new_key;
  k = key_update(GateKind::CZ, k, cz_wires).new_key;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t q = layout_.slot(i + 1);
    if (k[i].a) link_.client_op(state, GateOp::x(q));
    if (k[i].b) link_.client_op(state, GateOp::z(q));
  }
}

double Client::delegate_block(Statevector& state, GateKind kind, const std::vector<std::size_t>& wires,
                              double theta) {
  const std::size_t s1 = layout_.slot(1), s2 = layout_.slot(2), s3 = layout_.slot(3), s4 = layout_.slot(4);
  for (auto w : wires)
    if (w >= layout_.n_data) throw std::invalid_argument("delegate_block: wire is not a data qubit");

  std::vector<KeyBits> keys;
  double theta_hat = 0.0;

  switch (kind) {
    case GateKind::H:
    case GateKind::CZ: {
      if (kind == GateKind::H) {
        if (wires.size() != 1) throw std::invalid_argument("delegate_block: H takes one wire");
        link_.client_op(state, GateOp::swap(wires[0], s1));
      } else {
        if (wires.size() != 2 || wires[0] == wires[1])
          throw std::invalid_argument("delegate_block: CZ takes two distinct wires");
        link_.client_op(state, GateOp::swap(wires[0], s2));
        link_.client_op(state, GateOp::swap(wires[1], s3));
      }
      auto records = pad_slots_1_3(state, keys);
      const auto d4 = pads_.draw();
      if (d4.bits.b) link_.client_op(state, GateOp::z(s4));
      if (d4.bits.a) link_.client_op(state, GateOp::x(s4));
      records.push_back({s4, d4.id});

      Message h;
      h.block_start = true;
      h.register_qubits = layout_.slots();
      state = link_.round_trip(std::move(state), std::move(h), std::move(records)).state;

      decrypt_slots_1_3(state, keys);
      if (d4.bits.a) link_.client_op(state, GateOp::x(s4));
      if (d4.bits.b) link_.client_op(state, GateOp::z(s4));

      if (kind == GateKind::H) {
        link_.client_op(state, GateOp::swap(wires[0], s1));
      } else {
        link_.client_op(state, GateOp::swap(wires[1], s3));
        link_.client_op(state, GateOp::swap(wires[0], s2));
        link_.client_reset(state, s1, measure_rng_);
      }
      break;
    }
    case GateKind::Rz: {
      if (wires.size() != 1) throw std::invalid_argument("delegate_block: Rz takes one wire");
      const auto slot_records = pad_slots_1_3(state, keys);
      bool first = true;
      RzTransport transport = [&](Statevector& s, int tag, const PadRecord& pad) {
        Message h;
        h.block_start = first;
        h.tag = tag;
        h.register_qubits = layout_.slots();
        auto records = slot_records;
        records.push_back(pad);
        s = link_.round_trip(std::move(s), std::move(h), std::move(records)).state;
        first = false;
      };
      const AngleDigits digits = digitize_eps(theta, epsilon_, extractor_);
      const BlindRzResult r = algo2_blind_rz(state, wires[0], s4, digits, link_, pads_, transport);
      theta_hat = r.theta_hat;
      decrypt_slots_1_3(state, keys);
      link_.client_reset(state, s1, measure_rng_);
      const std::size_t keep[] = {s4};
      garbage_.push_back(reduced_density(state, keep));
      break;
    }
    default:
      throw UnsupportedGateError(std::string("cannot delegate ") + std::string(gate_name(kind)));
  }
  return theta_hat;
}

// ---------------------------------------------------------------------------

Statevector extract_data(const Statevector& joint, std::size_t n_data, double tol) {
  const std::size_t d = std::size_t{1} << n_data;
  std::vector<Complex> amps(joint.amplitudes().begin(), joint.amplitudes().begin() + static_cast<std::ptrdiff_t>(d));
  double w = 0.0;
  for (const auto& a : amps) w += std::norm(a);
  if (std::abs(1.0 - w) > tol)
    throw std::logic_error("slot qubits are not in |0>: data weight " + std::to_string(w));
  for (auto& a : amps) a /= std::sqrt(w);
  return Statevector(n_data, std::move(amps));
}

Statevector simulate_with_outcomes(const Circuit& c, const std::vector<int>& outcomes) {
  validate(c);
  auto s = Statevector::zero(c.n_qubits);
  std::size_t j = 0;
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::Measure) {
      if (j >= outcomes.size()) throw std::invalid_argument("simulate_with_outcomes: too few outcomes");
      s.project(g.qubits[0], outcomes[j++]);
    } else {
      s.apply(g);
    }
  }
  return s;
}

ProtocolRun run_protocol(const Circuit& c, const RunOptions& options) {
  if (c.n_qubits < 1) throw std::invalid_argument("circuit has no qubits");
  if (c.n_qubits > kMaxDataQubits)
    throw CapacityError("circuit needs " + std::to_string(c.n_qubits + kSlots) + " qubits; simulator cap is " +
                        std::to_string(kMaxQubits));
  validate(c);
  for (const auto& g : c.gates)
    if (!is_client_gate(g.kind) && !is_server_gate(g.kind))
      throw UnsupportedGateError(std::string("gate ") + std::string(gate_name(g.kind)) + " is not lowered");

  const ResourceSet resource = ResourceSet::make(options.epsilon);
  const Layout layout{c.n_qubits};

  Rng master(options.seed);
  PadSource pads(master.split(1), options.pads);
  pads.set_pins(options.pinned);
  Rng measure_rng = master.split(2);

  Transcript transcript;
  transcript.seed = options.seed;
  transcript.epsilon = options.epsilon;

  UbqcServer server(resource);
  std::unique_ptr<Channel> channel;
  if (options.threaded)
    channel = std::make_unique<ThreadedChannel>(server);
  else
    channel = std::make_unique<DirectChannel>(server);

  Link link(*channel, transcript);
  Client client(layout, link, pads, measure_rng, options.extractor, options.epsilon);

  Statevector state = Statevector::zero(c.n_qubits + kSlots);
  Circuit approximated{c.n_qubits, {}};
  std::vector<int> measurements;
  std::vector<double> errors;

  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const GateOp& g = c.gates[i];
    const bool delegated = is_server_gate(g.kind);
    link.begin_gate(i, g.kind, delegated);
    if (!delegated) {
      if (g.kind == GateKind::Measure)
        measurements.push_back(link.client_measure(state, g.qubits[0], measure_rng));
      else
        link.client_op(state, g);
      approximated.gates.push_back(g);
    } else if (g.kind == GateKind::Rz) {
      const double theta_hat = client.delegate_block(state, g.kind, g.qubits, *g.angle);
      approximated.gates.push_back(GateOp::rz(g.qubits[0], theta_hat));
      errors.push_back(std::abs(*g.angle - theta_hat));
    } else {
      client.delegate_block(state, g.kind, g.qubits);
      approximated.gates.push_back(g);
    }
    link.end_gate();
  }
  channel.reset();
  transcript.complete = true;

  Statevector data = extract_data(state, c.n_qubits);
  return ProtocolRun{std::move(state), std::move(data),       std::move(transcript), std::move(approximated),
                     std::move(measurements), std::move(errors), client.garbage(), pads.draws(), resource.M};
}

}  // namespace blindrz
