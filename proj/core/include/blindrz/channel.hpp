#pragma once

// Client/server message passing and the transcript that records it.
//
// Quantum transmission is simulated by moving the whole joint statevector
// through the channel together with the list of qubits that are "on the
// wire". Servers act only on those qubits. The transcript keeps a snapshot
// (reduced density matrix) of the transmitted register for each message.

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "blindrz/statevec.hpp"

namespace blindrz {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Direction { ClientToServer, ServerToClient };
enum class Party { Client, Server };

struct OpRecord {
  Party party = Party::Client;
  GateKind kind = GateKind::X;
  std::vector<std::size_t> qubits;

  bool operator==(const OpRecord&) const = default;
};

struct Message {
  Direction direction = Direction::ClientToServer;
  /// First message of a delegated block; the server applies H and CZ.
  bool block_start = false;
  /// Angle tag k: the server applies Rz(pi / 2^k).
  std::optional<int> tag;
  /// Classical measurement result reported by the server.
  std::optional<int> outcome;
  /// Qubits in transit.
  std::vector<std::size_t> register_qubits;
  /// Gates the server applied (replies only).
  std::vector<OpRecord> applied;
};

struct Envelope {
  Message message;
  Statevector state;
};

class Server {
 public:
  virtual ~Server() = default;
  virtual Envelope step(Envelope in) = 0;
};

class Channel {
 public:
  virtual ~Channel() = default;
  virtual Envelope exchange(Envelope out) = 0;
};

/// Co-scheduled channel: the server runs on the caller's thread.
class DirectChannel final : public Channel {
 public:
  explicit DirectChannel(Server& server) : server_(server) {}
  Envelope exchange(Envelope out) override { return server_.step(std::move(out)); }

 private:
  Server& server_;
};

/// Server on its own thread, connected by two FIFO queues.
///
/// Server exceptions are forwarded to the client as ProtocolError and stop
/// the session.
class ThreadedChannel final : public Channel {
 public:
  explicit ThreadedChannel(Server& server);
  ~ThreadedChannel() override;
  ThreadedChannel(const ThreadedChannel&) = delete;
  ThreadedChannel& operator=(const ThreadedChannel&) = delete;

  Envelope exchange(Envelope out) override;

 private:
  void serve();

  Server& server_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::queue<Envelope> to_server_;
  std::queue<Envelope> to_client_;
  std::exception_ptr failure_;
  bool closing_ = false;
  std::thread worker_;
};

/// Client-private key bookkeeping for one padded qubit of a message.
struct PadRecord {
  std::size_t qubit = 0;
  std::size_t draw_id = 0;

  bool operator==(const PadRecord&) const = default;
};

struct MessageRecord {
  Message message;
  DensityMatrix payload;
  std::vector<PadRecord> pads;
  std::size_t gate_index = 0;
};

struct GateMarker {
  std::size_t gate_index = 0;
  GateKind kind = GateKind::X;
  bool delegated = false;
  std::size_t first_message = 0;
  std::size_t round_trips = 0;
};

struct Transcript {
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::vector<MessageRecord> messages;
  std::vector<OpRecord> ops;
  std::vector<GateMarker> gates;
  bool complete = false;

  std::size_t round_trips() const;
  /// FNV-1a over a canonical byte encoding of every field.
  std::uint64_t digest() const;
  std::string digest_hex() const;
};

/// Client endpoint: sends envelopes and writes the transcript.
class Link {
 public:
  Link(Channel& channel, Transcript& transcript) : channel_(channel), transcript_(transcript) {}

  /// Sends `state` with `header` (direction forced to ClientToServer) and
  /// returns the server's reply. Both messages are recorded.
  Envelope round_trip(Statevector state, Message header, std::vector<PadRecord> pads = {});

  /// Applies a client-side gate and logs it.
  void client_op(Statevector& state, const GateOp& g);
  /// Computational-basis measurement by the client.
  int client_measure(Statevector& state, std::size_t q, Rng& rng);
  /// Measure then flip back to |0>.
  void client_reset(Statevector& state, std::size_t q, Rng& rng);

  void begin_gate(std::size_t gate_index, GateKind kind, bool delegated);
  void end_gate();

  Transcript& transcript() noexcept { return transcript_; }

 private:
  Channel& channel_;
  Transcript& transcript_;
  std::optional<GateMarker> open_gate_;
  std::size_t round_trips_in_gate_ = 0;
};

}  // namespace blindrz
