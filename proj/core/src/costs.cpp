#include "blindrz/costs.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "blindrz/angle_codec.hpp"

namespace blindrz {

namespace {

void require_unit_interval(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon must lie in (0, 1)");
}

double log2_sq(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < kPi)) throw std::domain_error("epsilon must lie in (0, pi)");
  const double l = std::log2(kPi / epsilon);
  return l * l;
}

double sk_term(double epsilon, double x) { return std::pow(std::log(1.0 / epsilon), x); }

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

GateCensus census(const Circuit& c) {
  GateCensus g;
  for (const auto& op : c.gates) {
    if (op.kind == GateKind::Measure) continue;
    if (op.kind == GateKind::Rz || op.kind == GateKind::U)
      ++g.n_p;
    else
      ++g.n_np;
  }
  return g;
}

double cost_parametric_baseline(double n_p, double n_np, double epsilon, double sk_exponent) {
  require_unit_interval(epsilon);
  return n_p * sk_term(epsilon, sk_exponent) + n_np;
}

double cost_proposed(double n_p, double n_np, double epsilon) { return (n_p + n_np) * log2_sq(epsilon); }

double cost_proposed_measured(double n_p, double n_np, double epsilon) {
  const double M = precision_bits(epsilon);
  return n_p * M * (M + 1) / 2 + n_np;
}

bool is_singular_epsilon(double epsilon) { return std::abs(epsilon * std::exp(1.0) - 1.0) < 1e-6; }

double critical_ratio(double epsilon, double sk_exponent) {
  require_unit_interval(epsilon);
  if (is_singular_epsilon(epsilon)) throw std::domain_error("critical ratio is singular at epsilon = 1/e");
  return (log2_sq(epsilon) - 1.0) / (sk_term(epsilon, sk_exponent) - 1.0);
}

SweepResult sweep(const std::vector<double>& epsilons, const std::vector<double>& ratios,
                  const SweepOptions& options) {
  SweepResult out;
  for (double eps : epsilons) {
    if (is_singular_epsilon(eps)) {
      out.skipped.push_back(eps);
      continue;
    }
    const double c = critical_ratio(eps, options.sk_exponent);
    for (double r : ratios) {
      if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("ratio must lie in [0, 1]");
      const double n_p = r * options.gates, n_np = (1.0 - r) * options.gates;
      const double c_np = options.law == RoundLaw::Model ? cost_proposed(n_p, n_np, eps)
                                                         : cost_proposed_measured(n_p, n_np, eps);
      out.rows.push_back({eps, r, cost_parametric_baseline(n_p, n_np, eps, options.sk_exponent), c_np, c});
    }
  }
  return out;
}

std::vector<double> default_epsilon_grid() {
  std::vector<double> g;
  for (int e = 1; e <= 12; ++e) g.push_back(std::pow(10.0, -e));
  return g;
}

std::vector<double> default_ratio_grid() { return {0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0}; }

void write_csv(std::ostream& os, const std::vector<CostRow>& rows) {
  os << "epsilon,ratio,c_p,c_np,critical_ratio\n";
  for (const auto& r : rows)
    os << g6(r.epsilon) << ',' << g6(r.ratio) << ',' << g6(r.c_p) << ',' << g6(r.c_np) << ','
       << g6(r.critical_ratio) << '\n';
}

}  // namespace blindrz
