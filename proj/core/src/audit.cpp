#include "blindrz/audit.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "blindrz/angle_codec.hpp"
#include "blindrz/rz_protocol.hpp"

namespace blindrz {

ClassicalView classical_view(const Transcript& t) {
  if (!t.complete) throw std::invalid_argument("classical_view: transcript is incomplete");
  ClassicalView v;
  for (const auto& rec : t.messages)
    if (rec.message.direction == Direction::ClientToServer) v.push_back({rec.message.block_start, rec.message.tag});
  return v;
}

std::string serialize_view(const ClassicalView& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ';';
    if (v[i].block_start) os << 'B';
    if (v[i].tag) os << *v[i].tag;
  }
  return os.str();
}

Skeleton skeleton(const Circuit& c) {
  Skeleton s;
  for (const auto& g : c.gates) s.emplace_back(g.kind, g.qubits.size());
  return s;
}

ClassicalView expected_view(const Skeleton& s, int M) {
  ClassicalView v;
  const auto tags = tag_schedule(M);
  for (const auto& [kind, arity] : s) {
    if (kind == GateKind::H || kind == GateKind::CZ) {
      v.push_back({true, std::nullopt});
    } else if (kind == GateKind::Rz) {
      for (std::size_t i = 0; i < tags.size(); ++i) v.push_back({i == 0, tags[i]});
    }
  }
  return v;
}

ViewInvariance view_invariance(const Circuit& a, const Circuit& b, double epsilon,
                               const std::vector<std::uint64_t>& seeds) {
  ViewInvariance r;
  if (skeleton(a) != skeleton(b)) {
    r.detail = "skeleton mismatch";
    return r;
  }
  r.skeleton_match = true;
  r.identical = true;
  for (auto seed : seeds) {
    RunOptions o;
    o.epsilon = epsilon;
    o.seed = seed;
    const auto va = serialize_view(classical_view(run_protocol(a, o).transcript));
    const auto vb = serialize_view(classical_view(run_protocol(b, o).transcript));
    ++r.runs;
    if (va != vb) {
      r.identical = false;
      r.detail = "views differ at seed " + std::to_string(seed);
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

/// Position of `qubit` inside a message register.
std::size_t register_position(const Message& m, std::size_t qubit) {
  for (std::size_t i = 0; i < m.register_qubits.size(); ++i)
    if (m.register_qubits[i] == qubit) return i;
  throw std::logic_error("padded qubit is not in the message register");
}

Eigen::Matrix2cd slot_density(const MessageRecord& rec, std::size_t qubit) {
  const std::size_t keep[] = {register_position(rec.message, qubit)};
  return reduced_density(rec.payload, keep).matrix();
}

double distance_to_mixed(const Eigen::Matrix2cd& rho) {
  return trace_distance(DensityMatrix(rho), DensityMatrix::maximally_mixed(2));
}

double garbage_deviation(const ProtocolRun& run) {
  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 2);
  zero(0, 0) = 1.0;
  const DensityMatrix ket0(zero);
  double worst = 0.0;
  for (const auto& g : run.garbage) worst = std::max(worst, trace_distance(g, ket0));
  return worst;
}

RunOptions base_options(double epsilon, const MixednessOptions& o, std::uint64_t seed) {
  RunOptions r;
  r.epsilon = epsilon;
  r.seed = seed;
  r.pads = o.pads;
  r.extractor = o.extractor;
  return r;
}

}  // namespace

MixednessReport payload_mixedness(const Circuit& c, double epsilon, const MixednessOptions& options) {
  MixednessReport rep;
  const ProtocolRun base = run_protocol(c, base_options(epsilon, options, options.seed));
  rep.garbage_deviation = garbage_deviation(base);

  if (options.mode == MixMode::Exhaustive) {
    rep.threshold = 1e-10;
    // Every message and slot covered by each draw.
    std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> uses;
    for (std::size_t i = 0; i < base.transcript.messages.size(); ++i)
      for (const auto& p : base.transcript.messages[i].pads) uses[p.draw_id].emplace_back(i, p.qubit);

    for (const auto& [draw, sites] : uses) {
      std::vector<Eigen::Matrix2cd> acc(sites.size(), Eigen::Matrix2cd::Zero());
      for (std::uint8_t v = 0; v < 4; ++v) {
        RunOptions o = base_options(epsilon, options, options.seed);
        o.pinned[draw] = KeyBits{static_cast<std::uint8_t>(v & 1), static_cast<std::uint8_t>(v >> 1)};
        const ProtocolRun run = run_protocol(c, o);
        rep.garbage_deviation = std::max(rep.garbage_deviation, garbage_deviation(run));
        for (std::size_t j = 0; j < sites.size(); ++j)
          acc[j] += slot_density(run.transcript.messages[sites[j].first], sites[j].second) / 4.0;
      }
      for (const auto& rho : acc) {
        rep.max_distance = std::max(rep.max_distance, distance_to_mixed(rho));
        ++rep.slots_checked;
      }
    }
  } else {
    if (options.samples == 0) throw std::invalid_argument("sampled mode needs at least one sample");
    rep.threshold = 3.0 / std::sqrt(static_cast<double>(options.samples));
    std::vector<std::vector<std::pair<std::size_t, Eigen::Matrix2cd>>> acc;
    for (std::size_t n = 0; n < options.samples; ++n) {
      const ProtocolRun run = run_protocol(c, base_options(epsilon, options, options.seed + n));
      rep.garbage_deviation = std::max(rep.garbage_deviation, garbage_deviation(run));
      const auto& msgs = run.transcript.messages;
      if (acc.empty()) {
        acc.resize(msgs.size());
        for (std::size_t i = 0; i < msgs.size(); ++i)
          for (const auto& p : msgs[i].pads) acc[i].emplace_back(p.qubit, Eigen::Matrix2cd::Zero());
      }
      if (msgs.size() != acc.size()) throw std::logic_error("message count varies between seeds");
      for (std::size_t i = 0; i < msgs.size(); ++i)
        for (auto& [q, rho] : acc[i]) rho += slot_density(msgs[i], q);
    }
    for (const auto& per_msg : acc)
      for (const auto& [q, rho] : per_msg) {
        rep.max_distance =
            std::max(rep.max_distance, distance_to_mixed(rho / static_cast<double>(options.samples)));
        ++rep.slots_checked;
      }
  }
  rep.pass = rep.max_distance < rep.threshold;
  return rep;
}

// ---------------------------------------------------------------------------

RoundCount count_rounds(const Transcript& t) {
  if (!t.complete) throw std::invalid_argument("count_rounds: transcript is incomplete");
  const auto M = static_cast<std::size_t>(precision_bits(t.epsilon));
  RoundCount rc;
  rc.law_holds = true;
  for (const auto& g : t.gates) {
    GateRounds gr{g.gate_index, g.kind, g.round_trips, 0};
    if (g.kind == GateKind::H || g.kind == GateKind::CZ)
      gr.expected = 1;
    else if (g.kind == GateKind::Rz)
      gr.expected = M * (M + 1) / 2;
    rc.total += gr.rounds;
    rc.expected_total += gr.expected;
    if (gr.rounds != gr.expected) rc.law_holds = false;
    rc.per_gate.push_back(gr);
  }
  if (rc.total != t.round_trips()) rc.law_holds = false;
  return rc;
}

Confinement capability_confinement(const Transcript& t) {
  Confinement c;
  for (const auto& op : t.ops) {
    const bool ok = op.party == Party::Client ? is_client_gate(op.kind) : is_server_gate(op.kind);
    if (!ok)
      c.violations.push_back(std::string(op.party == Party::Client ? "client" : "server") + " applied " +
                             std::string(gate_name(op.kind)));
  }
  c.pass = c.violations.empty();
  return c;
}

// ---------------------------------------------------------------------------

AuditReport run_audit(const Circuit& c, double epsilon, const AuditOptions& options) {
  AuditReport rep;
  rep.epsilon = epsilon;
  rep.seed = options.mixedness.seed;
  rep.M = precision_bits(epsilon);

  const ProtocolRun run = run_protocol(c, base_options(epsilon, options.mixedness, options.mixedness.seed));
  const auto& t = run.transcript;

  {
    const auto got = serialize_view(classical_view(t));
    const auto want = serialize_view(expected_view(skeleton(c), rep.M));
    rep.checks.push_back({"classical_view_fixed", got == want, 0.0, 0.0,
                          got == want ? "schedule depends only on gate kinds and M" : "unexpected classical view"});
  }
  {
    const auto rc = count_rounds(t);
    rep.checks.push_back({"round_law", rc.law_holds, static_cast<double>(rc.total),
                          static_cast<double>(rc.expected_total), "1 per H/CZ, M(M+1)/2 per Rz"});
  }
  {
    const auto cc = capability_confinement(t);
    rep.checks.push_back({"capability_confinement", cc.pass, static_cast<double>(cc.violations.size()), 0.0,
                          cc.pass ? "client {x,z,swap,measure}, server {h,cz,rz}" : cc.violations.front()});
  }
  {
    const auto mx = payload_mixedness(c, epsilon, options.mixedness);
    rep.checks.push_back({"payload_mixedness", mx.pass, mx.max_distance, mx.threshold,
                          std::to_string(mx.slots_checked) + " padded slot snapshots"});
    rep.checks.push_back({"ancilla_garbage", mx.garbage_deviation < 1e-9, mx.garbage_deviation, 1e-9,
                          "slot 4 leftover vs |0><0|"});
  }
  if (options.compare) {
    const auto vi = view_invariance(c, *options.compare, epsilon, options.compare_seeds);
    // A skeleton mismatch is reported but is not an audit failure.
    rep.checks.push_back({"view_invariance", !vi.skeleton_match || vi.identical, static_cast<double>(vi.runs), 0.0,
                          vi.skeleton_match ? (vi.identical ? "identical views" : vi.detail)
                                            : "skeleton mismatch; views not compared"});
  }
  rep.pass = true;
  for (const auto& ch : rep.checks) rep.pass = rep.pass && ch.pass;
  return rep;
}

}  // namespace blindrz
