#pragma once

// Full blind delegation of a circuit through the fixed four-slot resource
//   J(eps) = Rz(upsilon)_4 CZ_{2,3} H_1.
//
// Register layout for an n-qubit circuit: data qubits 0..n-1, slots 1..4 at
// qubits n..n+3. Every message carries all four slots. Slots 1-3 are padded
// once per delegation, slot 4 once per round.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "blindrz/angle_codec.hpp"
#include "blindrz/channel.hpp"
#include "blindrz/rng.hpp"
#include "blindrz/statevec.hpp"

namespace blindrz {

inline constexpr std::size_t kSlots = 4;
inline constexpr std::size_t kMaxDataQubits = kMaxQubits - kSlots;

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedGateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Lowering to {X, Z, Swap, Measure} plus {H, CZ, Rz}.

bool is_client_gate(GateKind k);
bool is_server_gate(GateKind k);
bool is_lowered(const Circuit& c);

struct EulerZXZ {
  double alpha = 0.0;  // applied last
  double beta = 0.0;
  double gamma = 0.0;  // applied first
  double phase = 0.0;
};

/// U = e^{i phase} Rz(alpha) Rx(beta) Rz(gamma).
EulerZXZ euler_zxz(const Matrix2& u);

Circuit lower_circuit(const Circuit& c);

/// |<psi|A^dag B|psi>|^2 on a random input; nullopt if either contains Measure.
std::optional<double> lowering_fidelity(const Circuit& original, const Circuit& lowered, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------

struct ResourceSet {
  double epsilon = 0.0;
  int M = 0;
  double upsilon = 0.0;

  static ResourceSet make(double epsilon, std::int64_t p_o = 0);
};

struct Layout {
  std::size_t n_data = 0;
  std::size_t slot(std::size_t i) const { return n_data + i - 1; }  // i in 1..4
  std::vector<std::size_t> slots() const { return {slot(1), slot(2), slot(3), slot(4)}; }
};

/// Server state machine. Applies H_1 CZ_{2,3} on a block-start message and
/// Rz(pi/2^k)_4 on a message tagged k; rejects anything off the schedule.
class UbqcServer final : public Server {
 public:
  explicit UbqcServer(const ResourceSet& resource) : M_(resource.M) {}
  Envelope step(Envelope in) override;

 private:
  std::vector<int> expected_;  // remaining tags of the in-flight block
  std::size_t cursor_ = 0;
  int M_;
};

struct RunOptions {
  double epsilon = 1e-2;
  std::uint64_t seed = 0;
  bool pads = true;
  bool threaded = false;
  Extractor extractor = Extractor::Floor;
  /// Overrides for individual pad draws (audit and exhaustive tests).
  std::map<std::size_t, KeyBits> pinned;
};

struct ProtocolRun {
  /// Joint data + slot state after the run.
  Statevector state;
  /// Data register alone (slots are |0000> up to phase).
  Statevector data;
  Transcript transcript;
  /// Input with every Rz(theta) replaced by the delegated Rz(theta_hat).
  Circuit approximated;
  std::vector<int> measurements;
  /// |theta - theta_hat| per Rz, in circuit order.
  std::vector<double> angle_errors;
  /// Slot-4 reduced density after each Rz delegation.
  std::vector<DensityMatrix> garbage;
  std::size_t pad_draws = 0;
  int M = 0;
};

/// Client side of the protocol for one delegated gate. Exposed for tests.
class Client {
 public:
  Client(Layout layout, Link& link, PadSource& pads, Rng& measure_rng, Extractor extractor, double epsilon);

  /// kind = H (wires[0]), CZ (wires[0], wires[1]) or Rz (wires[0], theta).
  /// Returns theta_hat for Rz.
  double delegate_block(Statevector& state, GateKind kind, const std::vector<std::size_t>& wires,
                        double theta = 0.0);

  const std::vector<DensityMatrix>& garbage() const noexcept { return garbage_; }

 private:
  std::vector<PadRecord> pad_slots_1_3(Statevector& state, std::vector<KeyBits>& keys);
  void decrypt_slots_1_3(Statevector& state, const std::vector<KeyBits>& keys);

  Layout layout_;
  Link& link_;
  PadSource& pads_;
  Rng& measure_rng_;
  Extractor extractor_;
  double epsilon_;
  std::vector<DensityMatrix> garbage_;
};

/// Runs a lowered circuit; throws UnsupportedGateError for non-lowered
/// input and CapacityError when n + 4 exceeds the simulator cap.
ProtocolRun run_protocol(const Circuit& c, const RunOptions& options);

/// Direct simulation with measurement outcomes forced to `outcomes`.
Statevector simulate_with_outcomes(const Circuit& c, const std::vector<int>& outcomes);

/// Data amplitudes with every slot qubit in |0>; throws if slots carry weight.
Statevector extract_data(const Statevector& joint, std::size_t n_data, double tol = 1e-9);

}  // namespace blindrz
