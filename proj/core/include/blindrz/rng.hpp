#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace blindrz {

/// Seeded generator with independent child streams.
///
/// Children are derived by hashing (seed, stream) with splitmix64, so a
/// stream's output does not depend on how much any other stream consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  Rng split(std::uint64_t stream) const { return Rng(seed_, mix(stream_, stream)); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  bool bit() { return (engine_() >> 63) != 0; }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Bit pair (a, b) of the pad X^a Z^b.
struct KeyBits {
  std::uint8_t a = 0;
  std::uint8_t b = 0;

  bool operator==(const KeyBits&) const = default;
};

/// Source of one-time-pad key pairs.
///
/// Every draw gets a sequential id and is logged privately. Tests and the
/// auditor may pin any draw by id; the underlying stream is consumed either
/// way, so pinning one draw never shifts the others. With pads disabled every
/// draw returns (0, 0).
class PadSource {
 public:
  explicit PadSource(Rng rng, bool enabled = true) : rng_(std::move(rng)), enabled_(enabled) {}

  struct Draw {
    std::size_t id;
    KeyBits bits;
  };

  Draw draw();

  void pin(std::size_t id, KeyBits bits) { pinned_[id] = bits; }
  void set_pins(std::map<std::size_t, KeyBits> pins) { pinned_ = std::move(pins); }
  bool enabled() const noexcept { return enabled_; }
  std::size_t draws() const noexcept { return log_.size(); }
  const std::vector<KeyBits>& log() const noexcept { return log_; }

 private:
  Rng rng_;
  bool enabled_;
  std::map<std::size_t, KeyBits> pinned_;
  std::vector<KeyBits> log_;
};

}  // namespace blindrz
