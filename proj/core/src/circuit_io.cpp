#include "blindrz/circuit_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace blindrz {

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t j = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > j) out.push_back(s.substr(j, i - j));
  }
  return out;
}

std::size_t parse_index(std::string_view tok, std::size_t line, const char* what) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw CircuitParseError(line, std::string("expected a non-negative integer ") + what + ", got '" +
                                      std::string(tok) + "'");
  return v;
}

double parse_real(std::string_view tok, std::size_t line) {
  const std::string s(tok);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(v))
    throw CircuitParseError(line, "expected a finite real number, got '" + s + "'");
  return v;
}

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  bool have_version = false, have_qubits = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string_view key = tok[0];

    if (!have_version) {
      if (key != "version" || tok.size() != 2)
        throw CircuitParseError(line_no, "expected 'version " + std::to_string(kCircuitFormatVersion) + "'");
      if (parse_index(tok[1], line_no, "version") != static_cast<std::size_t>(kCircuitFormatVersion))
        throw CircuitParseError(line_no, "unsupported format version " + std::string(tok[1]));
      have_version = true;
      continue;
    }
    if (!have_qubits) {
      if (key != "qubits" || tok.size() != 2) throw CircuitParseError(line_no, "expected 'qubits <N>'");
      c.n_qubits = parse_index(tok[1], line_no, "qubit count");
      if (c.n_qubits < 1 || c.n_qubits > kMaxFileQubits)
        throw CircuitParseError(line_no, "qubit count must lie in [1, " + std::to_string(kMaxFileQubits) + "]");
      have_qubits = true;
      continue;
    }

    const auto kind = parse_gate_name(key);
    if (!kind) throw UnknownGateError(line_no, "unknown gate '" + std::string(key) + "'");

    const std::size_t arity = gate_arity(*kind);
    const std::size_t params = *kind == GateKind::Rz ? 1 : *kind == GateKind::U ? 8 : 0;
    if (tok.size() != 1 + arity + params)
      throw CircuitParseError(line_no, std::string(key) + " takes " + std::to_string(arity) + " qubit(s)" +
                                           (params ? " and " + std::to_string(params) + " real(s)" : std::string()));
    GateOp g;
    g.kind = *kind;
    for (std::size_t i = 0; i < arity; ++i) {
      const std::size_t q = parse_index(tok[1 + i], line_no, "qubit index");
      if (q >= c.n_qubits)
        throw CircuitParseError(line_no, "qubit " + std::to_string(q) + " out of range for " +
                                             std::to_string(c.n_qubits) + " qubits");
      g.qubits.push_back(q);
    }
    if (*kind == GateKind::Rz) g.angle = parse_real(tok[1 + arity], line_no);
    if (*kind == GateKind::U) {
      Matrix2 m;
      for (std::size_t i = 0; i < 4; ++i)
        m[i] = {parse_real(tok[2 + 2 * i], line_no), parse_real(tok[3 + 2 * i], line_no)};
      g.matrix = m;
    }
    try {
      validate(g, c.n_qubits);
    } catch (const std::invalid_argument& e) {
      throw CircuitParseError(line_no, e.what());
    }
    c.gates.push_back(std::move(g));
  }
  if (!have_version) throw CircuitParseError(line_no, "missing 'version' header");
  if (!have_qubits) throw CircuitParseError(line_no, "missing 'qubits' header");
  return c;
}

Circuit read_circuit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_circuit(ss.str());
}

std::string format_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "version " << kCircuitFormatVersion << "\n";
  os << "qubits " << c.n_qubits << "\n";
  for (const auto& g : c.gates) {
    os << gate_name(g.kind);
    for (auto q : g.qubits) os << ' ' << q;
    if (g.angle) os << ' ' << fmt_real(*g.angle);
    if (g.matrix)
      for (const auto& z : *g.matrix) os << ' ' << fmt_real(z.real()) << ' ' << fmt_real(z.imag());
    os << "\n";
  }
  return os.str();
}

void write_circuit_file(const std::string& path, const Circuit& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << format_circuit(c);
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace blindrz
