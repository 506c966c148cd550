#pragma once

// Blindness checks over protocol transcripts.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blindrz/channel.hpp"
#include "blindrz/ubqc.hpp"

namespace blindrz {

/// What the server sees classically in one inbound message.
struct ClassicalEvent {
  bool block_start = false;
  std::optional<int> tag;
  bool operator==(const ClassicalEvent&) const = default;
};

using ClassicalView = std::vector<ClassicalEvent>;

/// Throws std::invalid_argument on an incomplete transcript.
ClassicalView classical_view(const Transcript& t);
/// Canonical text form, e.g. "B;B1;2;1".
std::string serialize_view(const ClassicalView& v);

using Skeleton = std::vector<std::pair<GateKind, std::size_t>>;
Skeleton skeleton(const Circuit& c);
/// View every run of a circuit with this skeleton must produce.
ClassicalView expected_view(const Skeleton& s, int M);

struct ViewInvariance {
  bool skeleton_match = false;
  bool identical = false;
  std::size_t runs = 0;
  std::string detail;
};

ViewInvariance view_invariance(const Circuit& a, const Circuit& b, double epsilon,
                               const std::vector<std::uint64_t>& seeds);

enum class MixMode { Exhaustive, Sampled };

struct MixednessOptions {
  MixMode mode = MixMode::Exhaustive;
  std::size_t samples = 4096;
  bool pads = true;
  std::uint64_t seed = 0;
  Extractor extractor = Extractor::Floor;
};

struct MixednessReport {
  double max_distance = 0.0;
  double threshold = 0.0;
  std::size_t slots_checked = 0;
  /// Largest deviation of the slot-4 leftover from |0><0| over all runs.
  double garbage_deviation = 0.0;
  bool pass = false;
};

MixednessReport payload_mixedness(const Circuit& c, double epsilon, const MixednessOptions& options);

struct GateRounds {
  std::size_t gate_index = 0;
  GateKind kind = GateKind::X;
  std::size_t rounds = 0;
  std::size_t expected = 0;
};

struct RoundCount {
  std::vector<GateRounds> per_gate;
  std::size_t total = 0;
  std::size_t expected_total = 0;
  bool law_holds = false;
};

RoundCount count_rounds(const Transcript& t);

struct Confinement {
  bool pass = false;
  std::vector<std::string> violations;
};

/// Client ops within {X, Z, Swap, Measure}; server ops within {H, CZ, Rz}.
Confinement capability_confinement(const Transcript& t);

struct AuditCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct AuditReport {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  int M = 0;
  std::vector<AuditCheck> checks;
  bool pass = false;
};

struct AuditOptions {
  MixednessOptions mixedness;
  std::optional<Circuit> compare;
  std::vector<std::uint64_t> compare_seeds = {0, 1, 2};
};

AuditReport run_audit(const Circuit& c, double epsilon, const AuditOptions& options);

}  // namespace blindrz
