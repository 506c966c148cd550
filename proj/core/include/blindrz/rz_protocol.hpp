#pragma once

// Interactive decryption of delegated Rz rotations.
//
// The server only ever applies Rz(pi/2^k) for a plaintext digit index k.
// Commuting Rz(t) past a pad X^a Z^b flips its sign when a = 1, so
// the client either accepts the result or requests the doubled angle in the
// next round, ending at k = 1 where the leftover Rz(pi) is a client Z.
//
// For the blind variant each digit block m issues the full block of rounds
// k = m..1 whatever the digit is. Classical key-dependent swaps route each
// round either to the working qubit or to an ancilla holding |0>, on which
// the rotation only produces a global phase.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "blindrz/angle_codec.hpp"
#include "blindrz/channel.hpp"
#include "blindrz/rng.hpp"
#include "blindrz/statevec.hpp"

namespace blindrz {

/// a ^ q, the exponent in Rz(t) X^a Z^b = Rz(2t)^(a^q) X^a Z^b Rz((-1)^q t).
int rz_conjugation_exponent(int a, int q);

/// After the server applied Rz(sign * pi/2) to a qubit padded with `key`,
/// applies X^a then Z^(a^b). Returns phi with state = i^phi Rz(sign*pi/2)|psi>.
int decrypt_rz_pi2(Statevector& state, std::size_t q, KeyBits key, int sign = +1);

/// Applies Rz(pi / 2^tag) to the first register qubit of each message.
class RzServer final : public Server {
 public:
  Envelope step(Envelope in) override;
};

/// Angle tags in the order the blind protocol sends them: (1), (2,1), ..., (M..1).
std::vector<int> tag_schedule(int M);

struct Algo1Result {
  std::size_t rounds = 0;
  std::vector<KeyBits> keys;
};

/// Half-blind Rz(pi/2^m) on qubit q using one |0> ancilla; m rounds.
Algo1Result algo1_rz(Statevector& state, std::size_t q, std::size_t ancilla, int m, Link& link,
                     PadSource& pads);

/// Round keys for one digit block, in round order k = m, m-1, ..., 1.
using RoundKeys = std::vector<KeyBits>;

struct SwapStep {
  int k = 0;
  int a = 0;
  /// Working qubit was in the ancilla during this round.
  bool live = false;
  /// Swap back to the working position after this round.
  bool swap_out = false;
  /// Client Z after the final round (residual Rz(pi)).
  bool base_z = false;
};

struct SwapSchedule {
  int m = 0;
  int s = 0;
  int q = 0;
  bool swap_in = false;
  std::vector<SwapStep> steps;
};

SwapSchedule swap_schedule(int m, int s, int q, const RoundKeys& keys);

/// Literal two-qubit block circuit (working qubit 0, ancilla qubit 1) with
/// swaps, pads and server rotations.
Eigen::Matrix4cd swap_circuit_unitary(int m, int s, int q, const RoundKeys& keys);
/// Swap-free equivalent restricted to the working qubit.
Matrix2 swap_equiv_unitary(int m, int s, int q, const RoundKeys& keys);

struct BlindRzResult {
  AngleDigits digits;
  double theta_hat = 0.0;
  std::size_t rounds = 0;
  std::vector<int> tags;
};

/// Sends one padded round to the server. `state` is replaced by the reply.
using RzTransport = std::function<void(Statevector& state, int tag, const PadRecord& pad)>;

/// Blind Rz(theta_hat) on `work` with `ancilla` (|0>) as the transmitted qubit.
BlindRzResult algo2_blind_rz(Statevector& state, std::size_t work, std::size_t ancilla, const AngleDigits& digits,
                             Link& link, PadSource& pads, const RzTransport& transport);
BlindRzResult algo2_blind_rz(Statevector& state, std::size_t work, std::size_t ancilla, double theta,
                             double epsilon, Link& link, PadSource& pads,
                             Extractor extractor = Extractor::Floor);

}  // namespace blindrz
