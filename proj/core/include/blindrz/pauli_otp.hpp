#pragma once

// Quantum one-time pad and the key-update algebra of delegated gates.
//
// A key assigns (a, b) to every qubit; encryption applies Z^b then X^a, so
// the pad operator is Enc(k) = (x) X^a Z^b. A key update for gate U is the
// triple (k', C, phi) with
//
//   U . Enc(k) = i^phi . C . Enc(k') . U
//
// where C is a (possibly empty) list of key-conditioned CX/CZ corrections.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blindrz/channel.hpp"
#include "blindrz/rng.hpp"
#include "blindrz/statevec.hpp"

namespace blindrz {

struct PauliKey {
  std::vector<KeyBits> bits;

  static PauliKey zero(std::size_t n) { return {std::vector<KeyBits>(n)}; }
  /// Key number `index` in [0, 4^n): qubit j takes bits (2j, 2j+1) as (a, b).
  static PauliKey from_index(std::size_t n, std::size_t index);

  std::size_t size() const noexcept { return bits.size(); }
  KeyBits& operator[](std::size_t q) { return bits[q]; }
  const KeyBits& operator[](std::size_t q) const { return bits[q]; }

  bool operator==(const PauliKey&) const = default;
};

struct KeyUpdate {
  PauliKey new_key;
  std::vector<GateOp> corrections;
  int phase_exponent = 0;
};

Statevector encrypt(Statevector state, const PauliKey& key);
Statevector decrypt(Statevector state, const PauliKey& key);
/// Pads a single qubit in place (Z^b then X^a).
void encrypt_qubit(Statevector& state, std::size_t q, KeyBits k);
/// Removes a single-qubit pad in place (X^a then Z^b).
void decrypt_qubit(Statevector& state, std::size_t q, KeyBits k);

/// Key update for a delegated Clifford-type gate acting on `qubits` of a
/// register whose full key is `key`. Supported: H, S, CX, CZ, CCX.
KeyUpdate key_update(GateKind kind, const PauliKey& key, std::span<const std::size_t> qubits);

/// Average of Enc(k)|psi><psi|Enc(k)^dagger over all 4^n keys.
DensityMatrix pad_average(const Statevector& state);

// ---------------------------------------------------------------------------
// T gate by gadget.

/// Server side of the T gadget: on register (data, ancilla) applies T to the
/// data qubit, CX with the ancilla as control, and measures the data qubit.
class TGadgetServer final : public Server {
 public:
  explicit TGadgetServer(Rng rng, std::optional<int> forced_outcome = std::nullopt)
      : rng_(std::move(rng)), forced_(forced_outcome) {}
  Envelope step(Envelope in) override;

 private:
  Rng rng_;
  std::optional<int> forced_;
};

struct TDelegation {
  Statevector state;
  /// Key now protecting qubit q, which carries T|psi>.
  KeyBits key;
  int outcome = 0;
  KeyBits ancilla_bits;  // (y, d)
};

/// Delegates T on qubit q (currently padded with `key`) using `ancilla`,
/// which must be |0>. Fresh (y, d) are drawn from `rng` unless given.
TDelegation t_delegate(Statevector state, std::size_t q, std::size_t ancilla, KeyBits key, Rng& rng,
                       Channel& channel, std::optional<KeyBits> ancilla_bits = std::nullopt);

// ---------------------------------------------------------------------------

struct RuleReport {
  GateKind kind = GateKind::H;
  std::size_t trials = 0;
  std::size_t cases = 0;
  /// Max entrywise deviation including the tracked phase i^phi.
  double max_exact_deviation = 0.0;
  /// Max deviation up to global phase.
  double max_deviation = 0.0;
};

/// Checks the update rule for `kind` on `trials` random states and every key
/// (and, for T, every ancilla key and both measurement branches).
RuleReport verify_rule(GateKind kind, std::size_t trials, std::uint64_t seed = 1);

}  // namespace blindrz
