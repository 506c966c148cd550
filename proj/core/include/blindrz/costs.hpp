#pragma once

// Communication-cost model.
//
//   C_p  = n_p ln^x(1/eps) + n_np          (Solovay-Kitaev baseline, x = 3.97)
//   C_np = (n_p + n_np) log2^2(pi/eps)     (this protocol)
//   c    = (log2^2(pi/eps) - 1) / (ln^x(1/eps) - 1)
//
// c is the parametric fraction n_p / (n_p + n_np) above which C_np < C_p.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "blindrz/statevec.hpp"

namespace blindrz {

inline constexpr double kSkExponent = 3.97;

struct GateCensus {
  std::size_t n_p = 0;
  std::size_t n_np = 0;
  bool operator==(const GateCensus&) const = default;
};

/// Rz and U are parametric; Measure is not a gate for costing purposes.
GateCensus census(const Circuit& c);

double cost_parametric_baseline(double n_p, double n_np, double epsilon, double sk_exponent = kSkExponent);
double cost_proposed(double n_p, double n_np, double epsilon);
/// Round trips actually issued: M(M+1)/2 per Rz, one per H or CZ.
double cost_proposed_measured(double n_p, double n_np, double epsilon);
double critical_ratio(double epsilon, double sk_exponent = kSkExponent);
bool is_singular_epsilon(double epsilon);

enum class RoundLaw { Model, Measured };

struct CostRow {
  double epsilon = 0.0;
  double ratio = 0.0;
  double c_p = 0.0;
  double c_np = 0.0;
  double critical_ratio = 0.0;
};

struct SweepOptions {
  /// Gate count the ratio is applied to.
  double gates = 1000.0;
  double sk_exponent = kSkExponent;
  RoundLaw law = RoundLaw::Model;
};

struct SweepResult {
  std::vector<CostRow> rows;
  /// Grid epsilons dropped because the critical ratio is singular there.
  std::vector<double> skipped;
};

SweepResult sweep(const std::vector<double>& epsilons, const std::vector<double>& ratios,
                  const SweepOptions& options = {});

std::vector<double> default_epsilon_grid();
std::vector<double> default_ratio_grid();

void write_csv(std::ostream& os, const std::vector<CostRow>& rows);

}  // namespace blindrz
