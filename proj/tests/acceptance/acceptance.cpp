// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "blindrz/angle_codec.hpp"
#include "blindrz/audit.hpp"
#include "blindrz/circuit_io.hpp"
#include "blindrz/costs.hpp"
#include "blindrz/pauli_otp.hpp"
#include "blindrz/rz_protocol.hpp"
#include "blindrz/ubqc.hpp"
#include "oracle.hpp"

#ifdef BLINDRZ_HAVE_CLI
#include "blindrz_cli/cli.hpp"
#endif

using namespace blindrz;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Matrix2 random_unitary(Rng& rng) {
  const double a = rng.uniform() * kPi, p1 = rng.uniform() * 2 * kPi, p2 = rng.uniform() * 2 * kPi,
               g = rng.uniform() * 2 * kPi;
  const Complex e1 = std::polar(1.0, p1), e2 = std::polar(1.0, p2), ph = std::polar(1.0, g);
  return {ph * std::cos(a) * e1, -ph * std::sin(a) * std::conj(e2), ph * std::sin(a) * e2,
          ph * std::cos(a) * std::conj(e1)};
}

GateOp random_gate(std::size_t n, Rng& rng) {
  const auto a = static_cast<std::size_t>(rng.below(n));
  const auto b = (a + 1 + static_cast<std::size_t>(rng.below(n > 1 ? n - 1 : 1))) % n;
  const std::uint64_t kinds = n > 1 ? 10 : 7;
  switch (rng.below(kinds)) {
    case 0: return GateOp::h(a);
    case 1: return GateOp::x(a);
    case 2: return GateOp::z(a);
    case 3: return GateOp::s(a);
    case 4: return GateOp::t(a);
    case 5: return GateOp::u(a, random_unitary(rng));
    case 6: return GateOp::rz(a, (rng.uniform() * 2 - 1) * 2 * kPi);
    case 7: return GateOp::cx(a, b);
    case 8: return GateOp::cz(a, b);
    default: return GateOp::swap(a, b);
  }
}

/// Random circuit on n <= 3 qubits whose lowering has at most 30 gates.
Circuit random_circuit(Rng& rng) {
  const std::size_t n = 1 + static_cast<std::size_t>(rng.below(3));
  const std::size_t target = 10 + static_cast<std::size_t>(rng.below(21));
  Circuit c{n, {GateOp::rz(0, (rng.uniform() * 2 - 1) * 2 * kPi)}};
  for (int attempts = 0; attempts < 200; ++attempts) {
    Circuit next = c;
    next.gates.push_back(random_gate(n, rng));
    if (lower_circuit(next).gates.size() > target) continue;
    c = std::move(next);
    if (lower_circuit(c).gates.size() == target) break;
  }
  return c;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  double worst_approx = 1.0, worst_slack = 1.0, worst_ratio = 0.0;
  std::size_t runs = 0, bound_failures = 0, cap_failures = 0, coherent_failures = 0, approx_failures = 0, max_lowered = 0;
  for (int i = 0; i < 100; ++i) {
    const Circuit lowered = lower_circuit(random_circuit(rng));
    max_lowered = std::max(max_lowered, lowered.gates.size());
    const Statevector exact = simulate(lowered);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      RunOptions o;
      o.epsilon = 1e-2;
      o.seed = seed;
      const ProtocolRun run = run_protocol(lowered, o);
      ++runs;
      const double fa = fidelity(run.data, simulate(run.approximated));
      worst_approx = std::min(worst_approx, fa);
      approx_failures += fa < 1 - 1e-9;

      double bound = 0.0, amplitude = 0.0;
      for (double d : run.angle_errors) {
        if (d > kPi / std::ldexp(1.0, run.M) + 1e-12) ++bound_failures;
        bound += std::pow(std::sin(d / 2), 2);
        amplitude += std::sin(d / 2);
      }
      const double cap = static_cast<double>(run.angle_errors.size()) *
                         std::pow(std::sin(kPi / std::ldexp(1.0, run.M + 1)), 2);
      const double infid = 1 - fidelity(run.data, exact);
      worst_slack = std::min(worst_slack, bound - infid);
      if (bound > 0) worst_ratio = std::max(worst_ratio, infid / bound);
      bound_failures += infid > bound + 1e-12;
      cap_failures += infid > cap + 1e-12;
      coherent_failures += infid > amplitude * amplitude + 1e-12;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = approx_failures == 0 && bound_failures == 0 && secs < 60 && max_lowered <= 30;
  o.detail = std::to_string(runs) + " runs, min F(approx)=" + fmt("%.12f", worst_approx) +
             ", bound violations=" + std::to_string(bound_failures) + ", max infid/bound=" + fmt("%.4f", worst_ratio) +
             ", min slack=" + fmt("%.3g", worst_slack) + ", " + fmt("%.1f", secs) + " s" +
             " [with delta_i = pi/2^M: " + std::to_string(cap_failures) + " violations; (sum sin(delta_i/2))^2: " +
             std::to_string(coherent_failures) + " violations]";
  return o;
}

Outcome ac2() {
  Rng rng(2);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 2; ++n)
    for (int i = 0; i < 20; ++i) {
      const auto psi = random_state(n, rng);
      worst = std::max(worst, trace_distance(pad_average(psi), DensityMatrix::maximally_mixed(std::size_t{1} << n)));
    }
  return {worst < 1e-10, "40 states, max trace distance to I/2^n=" + fmt("%.3g", worst)};
}

Outcome ac3() {
  double worst = 0.0, worst_exact = 0.0;
  std::size_t cases = 0;
  for (GateKind k : {GateKind::H, GateKind::S, GateKind::CX, GateKind::CZ, GateKind::CCX, GateKind::T}) {
    const auto r = verify_rule(k, 20, 3);
    worst = std::max(worst, r.max_deviation);
    worst_exact = std::max(worst_exact, r.max_exact_deviation);
    cases += r.cases;
  }
  return {worst < 1e-10, std::to_string(cases) + " cases over H,S,CX,CZ,CCX,T; max deviation=" + fmt("%.3g", worst) +
                             " (with tracked phase " + fmt("%.3g", worst_exact) + ")"};
}

Outcome ac4() {
  Rng rng(4);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = (rng.uniform() * 2 - 1) * 2 * kPi;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int q = 0; q < 2; ++q) {
          const oracle::Mat pad = (a ? oracle::X() : oracle::I2()) * (b ? oracle::Z() : oracle::I2());
          const oracle::Mat lhs = oracle::Rz(t) * pad;
          const oracle::Mat dbl = rz_conjugation_exponent(a, q) ? oracle::Rz(2 * t) : oracle::I2();
          const oracle::Mat rhs = dbl * pad * oracle::Rz(q ? -t : t);
          worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
  }
  return {worst < 1e-12, "800 cases, max residual=" + fmt("%.3g", worst) + " (no phase freedom used)"};
}

Outcome ac5() {
  double worst = 0.0, worst_block = 0.0;
  std::size_t cases = 0;
  for (int m = 1; m <= 4; ++m)
    for (int s = 0; s < 2; ++s)
      for (int q = 0; q < 2; ++q)
        for (std::size_t idx = 0; idx < (std::size_t{1} << (2 * m)); ++idx) {
          RoundKeys keys;
          for (int i = 0; i < m; ++i)
            keys.push_back({static_cast<std::uint8_t>((idx >> (2 * i)) & 1),
                            static_cast<std::uint8_t>((idx >> (2 * i + 1)) & 1)});
          const oracle::Mat target = oracle::Rz((q ? -1 : 1) * s * kPi / std::ldexp(1.0, m));
          const oracle::Mat u = oracle::to_mat(swap_equiv_unitary(m, s, q, keys));
          worst = std::max(worst, oracle::phase_free_max(u, target));
          const Eigen::Matrix4cd full = swap_circuit_unitary(m, s, q, keys);
          oracle::Mat block(2, 2);
          block << full(0, 0), full(0, 1), full(1, 0), full(1, 1);
          worst_block = std::max(worst_block, oracle::phase_free_max(block, target));
          ++cases;
        }
  return {std::max(worst, worst_block) < 1e-10, std::to_string(cases) + " cases, swap-free max=" +
                                                    fmt("%.3g", worst) + ", swap circuit max=" +
                                                    fmt("%.3g", worst_block)};
}

Outcome ac6() {
  Rng rng(6);
  double worst = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-4})
    for (Extractor ex : {Extractor::Floor, Extractor::Balanced})
      for (int i = 0; i < 1000; ++i) {
        const double theta = (rng.uniform() * 2 - 1) * 4 * kPi;
        const auto d = digitize_eps(theta, eps, ex);
        const double lhs = reconstruct(d) + impurity(d) - static_cast<double>(d.p_o) * kPi;
        worst = std::max(worst, std::abs(lhs - (kPi - kPi / std::ldexp(1.0, d.M))));
      }
  return {worst < 1e-12, "6000 angles (both extractors), max deviation=" + fmt("%.3g", worst)};
}

Outcome ac7() {
  Rng rng(7);
  std::size_t rz = 0, clifford = 0, bad = 0;
  for (int i = 0; i < 10; ++i) {
    const Circuit c = lower_circuit(random_circuit(rng));
    RunOptions o;
    o.epsilon = 1e-2;
    o.seed = static_cast<std::uint64_t>(i);
    const auto run = run_protocol(c, o);
    if (run.M != 9) ++bad;
    const auto rc = count_rounds(run.transcript);
    for (const auto& g : rc.per_gate) {
      if (g.kind == GateKind::Rz) {
        ++rz;
        bad += g.rounds != 45 || g.rounds > 81;
      } else if (g.kind == GateKind::H || g.kind == GateKind::CZ) {
        ++clifford;
        bad += g.rounds != 1;
      } else {
        bad += g.rounds != 0;
      }
    }
    bad += rc.total != run.transcript.round_trips();
  }
  return {bad == 0 && rz > 0 && clifford > 0, std::to_string(rz) + " Rz blocks at 45 (<= 81), " +
                                                  std::to_string(clifford) + " H/CZ blocks at 1, violations=" +
                                                  std::to_string(bad)};
}

Outcome ac8() {
  Rng rng(8);
  std::size_t differing = 0;
  for (int i = 0; i < 50; ++i) {
    Circuit a = lower_circuit(random_circuit(rng));
    Circuit b = a;
    for (auto& g : b.gates)
      if (g.kind == GateKind::Rz) g.angle = (rng.uniform() * 2 - 1) * 2 * kPi;
    const auto vi = view_invariance(a, b, 1e-2, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(i + 100)});
    differing += !(vi.skeleton_match && vi.identical);
  }

  double mixed = 0.0;
  std::size_t slots = 0;
  const std::vector<Circuit> audited{
      Circuit{1, {GateOp::h(0), GateOp::h(0)}},
      Circuit{2, {GateOp::h(0), GateOp::cz(0, 1), GateOp::rz(1, 0.9), GateOp::h(1)}},
      Circuit{1, {GateOp::h(0), GateOp::rz(0, -2.4), GateOp::rz(0, 1.1)}},
  };
  for (const auto& c : audited) {
    MixednessOptions o;
    const auto r = payload_mixedness(c, 1e-2, o);
    mixed = std::max(mixed, r.max_distance);
    slots += r.slots_checked;
  }

  MixednessOptions off;
  off.pads = false;
  const auto control = payload_mixedness(Circuit{1, {GateOp::h(0), GateOp::h(0)}}, 1e-2, off);

  return {differing == 0 && mixed < 1e-10 && control.max_distance >= 0.4 && !control.pass,
          "50 pairs, differing views=" + std::to_string(differing) + "; " + std::to_string(slots) +
              " padded slots, max distance=" + fmt("%.3g", mixed) + "; pads off distance=" +
              fmt("%.4f", control.max_distance)};
}

Outcome ac9() {
  const double c10 = critical_ratio(1e-10);
  const double l = std::log2(kPi / 1e-2);
  const double ref = (l * l - 1) / (std::pow(std::log(1e2), 3.97) - 1);
  const bool same6 = fmt("%.6g", critical_ratio(1e-2)) == fmt("%.6g", ref);
  bool monotone = true;
  const auto grid = default_epsilon_grid();
  for (std::size_t i = 1; i < grid.size(); ++i) monotone = monotone && critical_ratio(grid[i]) < critical_ratio(grid[i - 1]);
  return {std::abs(c10 - 0.005) <= 0.001 && same6 && monotone,
          "c(1e-10)=" + fmt("%.6g", c10) + ", c(1e-2)=" + fmt("%.6g", critical_ratio(1e-2)) + " vs " + fmt("%.6g", ref) +
              ", monotone over 1e-1..1e-12: " + (monotone ? "yes" : "no")};
}

Outcome ac10() {
#ifdef BLINDRZ_HAVE_CLI
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "blindrz_acceptance";
  fs::create_directories(dir);
  const fs::path input = dir / "demo.circ";
  {
    std::ofstream f(input);
    f << "version 1\nqubits 2\nh 0\ncx 0 1\nrz 1 0.7\nt 0\nu 1 0.6 0 -0.8 0 0.8 0 0.6 0\nmeasure 0\nrz 1 -1.3\n";
  }
  std::vector<std::string> reports, digests;
  for (int i = 0; i < 2; ++i) {
    const fs::path out = dir / ("report" + std::to_string(i) + ".json");
    std::ostringstream so, se;
    const int code = cli::run({"run", input.string(), "--epsilon", "1e-2", "--seed", "7", "--out", out.string()}, so,
                              se);
    if (code != 0) return {false, "run exited " + std::to_string(code) + ": " + se.str()};
    std::ifstream f(out, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    reports.push_back(ss.str());
    const auto p = reports.back().find("\"digest\": \"");
    digests.push_back(p == std::string::npos ? "" : reports.back().substr(p + 11, 16));
  }
  fs::remove_all(dir);
  const bool ok = reports[0] == reports[1] && !digests[0].empty() && digests[0] == digests[1];
  return {ok, std::string(reports[0] == reports[1] ? "byte-identical reports" : "reports differ") + ", digest " +
                  digests[0] + (digests[0] == digests[1] ? " == " : " != ") + digests[1]};
#else
  return {false, "command-line tool not built"};
#endif
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 protocol correctness", ac1},   {"AC2 pad mixedness", ac2},       {"AC3 key-update rules", ac3},
      {"AC4 conjugation identity", ac4},   {"AC5 swap-free equivalence", ac5}, {"AC6 delegated angle constancy", ac6},
      {"AC7 round-count law", ac7},        {"AC8 blindness audit", ac8},     {"AC9 cost model", ac9},
      {"AC10 determinism", ac10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
