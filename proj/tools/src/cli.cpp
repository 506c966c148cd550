#include "blindrz_cli/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "blindrz/audit.hpp"
#include "blindrz/circuit_io.hpp"
#include "blindrz/costs.hpp"
#include "blindrz/ubqc.hpp"

namespace blindrz::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kReportVersion = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Sink {
  std::string path;
  std::ostream& fallback;

  void write(const std::string& text) const {
    if (path.empty()) {
      fallback << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
  }
};

std::string extractor_name(Extractor e) { return e == Extractor::Floor ? "floor" : "balanced"; }

Circuit prepare(Circuit c, bool strict) {
  if (c.n_qubits > kMaxDataQubits)
    throw CapacityError("circuit needs " + std::to_string(c.n_qubits + kSlots) + " qubits; simulator cap is " +
                        std::to_string(kMaxQubits));
  if (is_lowered(c)) return c;
  if (strict) throw UnsupportedGateError("input is not lowered to {x, z, swap, measure, h, cz, rz}");
  return lower_circuit(c);
}

// ---------------------------------------------------------------------------

struct LowerArgs {
  std::string input;
  std::string out;
};

int cmd_lower(const LowerArgs& a, std::ostream& out, std::ostream& err) {
  const Circuit c = read_circuit_file(a.input);
  const Circuit lowered = lower_circuit(c);
  Sink{a.out, out}.write(format_circuit(lowered));

  std::ostringstream note;
  note << "lowered " << c.gates.size() << " -> " << lowered.gates.size() << " gates; ";
  if (c.n_qubits > kMaxQubits) {
    note << "equivalence check skipped (" << c.n_qubits << " qubits)";
  } else if (const auto f = lowering_fidelity(c, lowered)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", *f);
    note << "equivalence fidelity " << buf << (*f > 1 - 1e-9 ? " (ok)" : " (MISMATCH)");
  } else {
    note << "equivalence check skipped (circuit measures)";
  }
  err << note.str() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string input;
  std::string out;
  double epsilon = 1e-2;
  std::uint64_t seed = 0;
  bool strict = false;
  bool no_pads = false;
  bool threaded = false;
  Extractor extractor = Extractor::Floor;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  const Circuit original = read_circuit_file(a.input);
  const Circuit c = prepare(original, a.strict);

  RunOptions o;
  o.epsilon = a.epsilon;
  o.seed = a.seed;
  o.pads = !a.no_pads;
  o.threaded = a.threaded;
  o.extractor = a.extractor;
  const ProtocolRun run = run_protocol(c, o);

  const double f_approx = fidelity(run.data, simulate_with_outcomes(run.approximated, run.measurements));
  Json exact = nullptr, infid = nullptr, holds = nullptr;
  double bound = 0.0;
  for (double d : run.angle_errors) bound += std::pow(std::sin(d / 2), 2);
  try {
    const double f = fidelity(run.data, simulate_with_outcomes(c, run.measurements));
    exact = f;
    infid = 1.0 - f;
    holds = 1.0 - f <= bound + 1e-12;
  } catch (const std::exception&) {
    // The sampled outcome has no weight in the exact circuit.
  }

  const RoundCount rc = count_rounds(run.transcript);
  Json per_gate = Json::array();
  for (const auto& g : rc.per_gate)
    per_gate.push_back({{"index", g.gate_index}, {"gate", gate_name(g.kind)}, {"rounds", g.rounds}});

  Json report = {
      {"format", "blindrz-run"},
      {"version", kReportVersion},
      {"input", a.input},
      {"qubits", c.n_qubits},
      {"gates", original.gates.size()},
      {"lowered_gates", c.gates.size()},
      {"epsilon", a.epsilon},
      {"M", run.M},
      {"seed", a.seed},
      {"pads", o.pads},
      {"extractor", extractor_name(a.extractor)},
      {"fidelity",
       {{"vs_approximated", f_approx},
        {"vs_exact", exact},
        {"infidelity_exact", infid},
        {"infidelity_bound", bound},
        {"bound_holds", holds}}},
      {"rounds",
       {{"total", rc.total}, {"expected", rc.expected_total}, {"law_holds", rc.law_holds}, {"per_gate", per_gate}}},
      {"measurements", run.measurements},
      {"transcript",
       {{"messages", run.transcript.messages.size()},
        {"round_trips", run.transcript.round_trips()},
        {"digest", run.transcript.digest_hex()}}},
  };
  Sink{a.out, out}.write(report.dump(2) + "\n");
  return kOk;
}

// ---------------------------------------------------------------------------

struct AuditArgs {
  std::string input;
  std::string out;
  std::string compare;
  std::string mode = "exhaustive";
  double epsilon = 1e-2;
  std::uint64_t seed = 0;
  bool strict = false;
  bool no_pads = false;
};

MixednessOptions parse_mode(const std::string& mode) {
  MixednessOptions m;
  if (mode == "exhaustive") return m;
  const std::string prefix = "sampled:";
  if (mode.rfind(prefix, 0) == 0) {
    const std::string n = mode.substr(prefix.size());
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(n, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == n.size() && !n.empty() && v > 0) {
      m.mode = MixMode::Sampled;
      m.samples = static_cast<std::size_t>(v);
      return m;
    }
  }
  throw UsageError("--mode must be 'exhaustive' or 'sampled:<N>' with N > 0");
}

int cmd_audit(const AuditArgs& a, std::ostream& out) {
  const Circuit c = prepare(read_circuit_file(a.input), a.strict);
  AuditOptions o;
  o.mixedness = parse_mode(a.mode);
  o.mixedness.pads = !a.no_pads;
  o.mixedness.seed = a.seed;
  if (!a.compare.empty()) o.compare = prepare(read_circuit_file(a.compare), a.strict);
  const AuditReport rep = run_audit(c, a.epsilon, o);

  Json checks = Json::array();
  for (const auto& ch : rep.checks)
    checks.push_back({{"name", ch.name},
                      {"pass", ch.pass},
                      {"value", ch.value},
                      {"threshold", ch.threshold},
                      {"detail", ch.detail}});
  Json report = {
      {"format", "blindrz-audit"},
      {"version", kReportVersion},
      {"input", a.input},
      {"compare", a.compare.empty() ? Json(nullptr) : Json(a.compare)},
      {"epsilon", a.epsilon},
      {"M", rep.M},
      {"seed", a.seed},
      {"mode", a.mode},
      {"pads", !a.no_pads},
      {"checks", checks},
      {"pass", rep.pass},
  };
  Sink{a.out, out}.write(report.dump(2) + "\n");
  return rep.pass ? kOk : kAuditFailed;
}

// ---------------------------------------------------------------------------

struct CostArgs {
  std::vector<double> epsilons;
  std::vector<double> ratios;
  std::string out;
  std::string law = "model";
  double gates = 1000.0;
  double sk_exponent = kSkExponent;
};

int cmd_cost(const CostArgs& a, std::ostream& out, std::ostream& err) {
  SweepOptions o;
  o.gates = a.gates;
  o.sk_exponent = a.sk_exponent;
  o.law = a.law == "measured" ? RoundLaw::Measured : RoundLaw::Model;
  const auto eps = a.epsilons.empty() ? default_epsilon_grid() : a.epsilons;
  for (double e : eps)
    if (!(e > 0.0 && e < 1.0)) throw UsageError("--epsilon values must lie in (0, 1)");
  for (double r : a.ratios.empty() ? default_ratio_grid() : a.ratios)
    if (!(r >= 0.0 && r <= 1.0)) throw UsageError("--ratio values must lie in [0, 1]");

  const SweepResult s = sweep(eps, a.ratios.empty() ? default_ratio_grid() : a.ratios, o);
  for (double e : s.skipped) err << "warning: epsilon " << e << " is singular for the critical ratio; row omitted\n";
  std::ostringstream csv;
  write_csv(csv, s.rows);
  Sink{a.out, out}.write(csv.str());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"blind delegated quantum computation with recursive Rz decryption", "blindrz"};
  app.require_subcommand(1);

  const std::map<std::string, Extractor> extractors{{"floor", Extractor::Floor}, {"balanced", Extractor::Balanced}};

  LowerArgs lower;
  auto* lo = app.add_subcommand("lower", "Lower a circuit to {x, z, swap, measure, h, cz, rz}");
  lo->add_option("input", lower.input, "Circuit file")->required();
  lo->add_option("--out", lower.out, "Output circuit file (default stdout)");

  RunArgs runa;
  auto* ru = app.add_subcommand("run", "Run the blind protocol and report fidelity, rounds, digest");
  ru->add_option("input", runa.input, "Circuit file")->required();
  ru->add_option("--epsilon", runa.epsilon, "Target angle precision")->check(CLI::PositiveNumber);
  ru->add_option("--seed", runa.seed, "Seed");
  ru->add_flag("--strict", runa.strict, "Reject input that is not already lowered");
  ru->add_flag("--no-pads", runa.no_pads, "Disable one-time pads");
  ru->add_flag("--threaded", runa.threaded, "Run the server on its own thread");
  ru->add_option("--extractor", runa.extractor, "Digit extractor")
      ->transform(CLI::CheckedTransformer(extractors, CLI::ignore_case));
  ru->add_option("--out", runa.out, "Report path (default stdout)");

  AuditArgs audit;
  auto* au = app.add_subcommand("audit", "Run the blindness checks");
  au->add_option("input", audit.input, "Circuit file")->required();
  au->add_option("--epsilon", audit.epsilon, "Target angle precision")->check(CLI::PositiveNumber);
  au->add_option("--seed", audit.seed, "Seed");
  au->add_option("--mode", audit.mode, "exhaustive | sampled:<N>");
  au->add_option("--compare", audit.compare, "Second circuit for the view-invariance check");
  au->add_flag("--strict", audit.strict, "Reject input that is not already lowered");
  au->add_flag("--no-pads", audit.no_pads, "Negative control: disable one-time pads");
  au->add_option("--out", audit.out, "Report path (default stdout)");

  CostArgs cost;
  auto* co = app.add_subcommand("cost", "Emit the communication-cost sweep as CSV");
  co->add_option("--epsilon", cost.epsilons, "Precision grid point (repeatable; default 1e-1..1e-12)");
  co->add_option("--ratio", cost.ratios, "Parametric fraction (repeatable)");
  co->add_option("--gates", cost.gates, "Total gate count per row")->check(CLI::PositiveNumber);
  co->add_option("--sk-exponent", cost.sk_exponent, "Solovay-Kitaev exponent");
  co->add_option("--round-law", cost.law, "model | measured")->check(CLI::IsMember({"model", "measured"}));
  co->add_option("--out", cost.out, "CSV path (default stdout)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*lo) return cmd_lower(lower, out, err);
    if (*ru) return cmd_run(runa, out);
    if (*au) return cmd_audit(audit, out);
    return cmd_cost(cost, out, err);
  } catch (const UnknownGateError& e) {
    err << "error: " << e.what() << "\n";
    return kUnsupportedGate;
  } catch (const CircuitParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const UnsupportedGateError& e) {
    err << "error: " << e.what() << "\n";
    return kUnsupportedGate;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }
}

}  // namespace blindrz::cli
