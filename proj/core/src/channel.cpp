#include "blindrz/channel.hpp"

#include <bit>
#include <cstring>
#include <iomanip>
#include <sstream>

namespace blindrz {

// ---------------------------------------------------------------------------
// ThreadedChannel

ThreadedChannel::ThreadedChannel(Server& server) : server_(server), worker_([this] { serve(); }) {}

ThreadedChannel::~ThreadedChannel() {
  {
    std::lock_guard lock(mu_);
    closing_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

void ThreadedChannel::serve() {
  for (;;) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [this] { return closing_ || !to_server_.empty(); });
    if (closing_) return;
    Envelope in = std::move(to_server_.front());
    to_server_.pop();
    lock.unlock();

    try {
      Envelope out = server_.step(std::move(in));
      lock.lock();
      to_client_.push(std::move(out));
    } catch (...) {
      lock.lock();
      failure_ = std::current_exception();
    }
    lock.unlock();
    cv_.notify_all();
  }
}

Envelope ThreadedChannel::exchange(Envelope out) {
  std::unique_lock lock(mu_);
  if (failure_) throw ProtocolError("channel closed after server failure");
  to_server_.push(std::move(out));
  cv_.notify_all();
  cv_.wait(lock, [this] { return failure_ || !to_client_.empty(); });
  if (failure_) {
    try {
      std::rethrow_exception(failure_);
    } catch (const std::exception& e) {
      throw ProtocolError(std::string("server failed: ") + e.what());
    }
  }
  Envelope reply = std::move(to_client_.front());
  to_client_.pop();
  return reply;
}

// ---------------------------------------------------------------------------
// Transcript

namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x00000100000001b3ull;
    }
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      const auto b = static_cast<unsigned char>(v >> (8 * i));
      bytes(&b, 1);
    }
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

void hash_op(Fnv1a& h, const OpRecord& op) {
  h.u64(static_cast<std::uint64_t>(op.party));
  h.u64(static_cast<std::uint64_t>(op.kind));
  h.u64(op.qubits.size());
  for (auto q : op.qubits) h.u64(q);
}

}  // namespace

std::size_t Transcript::round_trips() const {
  std::size_t n = 0;
  for (const auto& m : messages)
    if (m.message.direction == Direction::ClientToServer) ++n;
  return n;
}

std::uint64_t Transcript::digest() const {
  Fnv1a h;
  h.u64(seed);
  h.f64(epsilon);
  h.u64(messages.size());
  for (const auto& rec : messages) {
    const auto& m = rec.message;
    h.u64(static_cast<std::uint64_t>(m.direction));
    h.u64(m.block_start);
    h.u64(m.tag ? static_cast<std::uint64_t>(*m.tag) + 1 : 0);
    h.u64(m.outcome ? static_cast<std::uint64_t>(*m.outcome) + 1 : 0);
    h.u64(m.register_qubits.size());
    for (auto q : m.register_qubits) h.u64(q);
    h.u64(m.applied.size());
    for (const auto& op : m.applied) hash_op(h, op);
    const auto& p = rec.payload.matrix();
    for (Eigen::Index r = 0; r < p.rows(); ++r)
      for (Eigen::Index c = 0; c < p.cols(); ++c) {
        h.f64(p(r, c).real());
        h.f64(p(r, c).imag());
      }
    h.u64(rec.pads.size());
    for (const auto& pad : rec.pads) {
      h.u64(pad.qubit);
      h.u64(pad.draw_id);
    }
    h.u64(rec.gate_index);
  }
  h.u64(ops.size());
  for (const auto& op : ops) hash_op(h, op);
  h.u64(gates.size());
  for (const auto& g : gates) {
    h.u64(g.gate_index);
    h.u64(static_cast<std::uint64_t>(g.kind));
    h.u64(g.delegated);
    h.u64(g.first_message);
    h.u64(g.round_trips);
  }
  h.u64(complete);
  return h.value();
}

std::string Transcript::digest_hex() const {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << digest();
  return os.str();
}

// ---------------------------------------------------------------------------
// Link

Envelope Link::round_trip(Statevector state, Message header, std::vector<PadRecord> pads) {
  header.direction = Direction::ClientToServer;
  header.applied.clear();
  const std::size_t gate_index = open_gate_ ? open_gate_->gate_index : 0;

  MessageRecord out{header, reduced_density(state, header.register_qubits), std::move(pads), gate_index};
  transcript_.messages.push_back(out);

  Envelope reply = channel_.exchange(Envelope{std::move(header), std::move(state)});
  reply.message.direction = Direction::ServerToClient;
  if (reply.message.register_qubits != out.message.register_qubits)
    throw ProtocolError("server returned a different register");

  for (const auto& op : reply.message.applied) transcript_.ops.push_back(op);
  transcript_.messages.push_back(
      MessageRecord{reply.message, reduced_density(reply.state, reply.message.register_qubits), {}, gate_index});
  ++round_trips_in_gate_;
  return reply;
}

void Link::client_op(Statevector& state, const GateOp& g) {
  state.apply(g);
  transcript_.ops.push_back(OpRecord{Party::Client, g.kind, g.qubits});
}

int Link::client_measure(Statevector& state, std::size_t q, Rng& rng) {
  const int m = state.measure(q, rng);
  transcript_.ops.push_back(OpRecord{Party::Client, GateKind::Measure, {q}});
  return m;
}

void Link::client_reset(Statevector& state, std::size_t q, Rng& rng) {
  if (client_measure(state, q, rng) == 1) client_op(state, GateOp::x(q));
}

void Link::begin_gate(std::size_t gate_index, GateKind kind, bool delegated) {
  if (open_gate_) end_gate();
  open_gate_ = GateMarker{gate_index, kind, delegated, transcript_.messages.size(), 0};
  round_trips_in_gate_ = 0;
}

void Link::end_gate() {
  if (!open_gate_) return;
  open_gate_->round_trips = round_trips_in_gate_;
  transcript_.gates.push_back(*open_gate_);
  open_gate_.reset();
}

}  // namespace blindrz
