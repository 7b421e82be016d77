#pragma once

// Exponent tuples and the admissibility predicates for the weighted
// interpolation and trace inequalities on radial functions.
//
// Every predicate returns a report with one entry per condition. Entries carry
// a signed residual: for "lhs >= rhs" the residual is lhs - rhs, for equalities
// it is -|lhs - rhs|. Violations are data; only malformed input throws.

#include <string>
#include <string_view>
#include <vector>

namespace radineq {

/// Exponents of ||x|^gamma u|_r <= C ||x|^alpha grad u|_p^a ||x|^beta u|_q^(1-a).
struct CknParams {
  int n = 1;
  double p = 1.0;
  double q = 1.0;
  double r = 1.0;
  double a = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double sigma = 0.0;  // carried but ignored when a == 0

  /// Builds a tuple with sigma derived from gamma = a*sigma + (1-a)*beta.
  /// At a == 0 sigma is left at zero.
  static CknParams with_derived_sigma(int n, double p, double q, double r, double a,
                                      double alpha, double beta, double gamma);
};

/// Exponents of |f(x,0)|x|^-beta|_q <= C ||(y,z)|^alpha grad f|_p.
struct TraceParams {
  int n = 1;
  double p = 1.0;
  double q = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Exponents of the weighted Riesz potential estimate
/// ||x|^-beta T_gamma v|_q <= C ||x|^alpha v|_p.
struct DddParams {
  int n = 1;
  double p = 1.0;
  double q = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;
};

enum class Theorem { ckn_classical, ckn_radial, trace_radial, trace_operator, ddd };

std::string_view theorem_name(Theorem t);

struct Condition {
  std::string label;
  bool satisfied = false;
  double residual = 0.0;
  bool vacuous = false;  // the condition does not apply to this tuple
};

struct AdmissibilityReport {
  Theorem theorem = Theorem::ckn_classical;
  bool verdict = true;
  std::vector<Condition> conditions;

  /// nullptr when no entry carries the label.
  const Condition* find(std::string_view label) const;
  std::vector<std::string> failing() const;
};

struct Tolerance {
  double abs = 1e-12;
};

/// sigma = (gamma - (1-a) beta) / a. Throws for a == 0.
double derive_sigma(double a, double gamma, double beta);

/// (1/r + gamma/n) - a(1/p + (alpha-1)/n) - (1-a)(1/q + beta/n).
double scaling_residual(const CknParams& params);

/// n/q - (n+1)/p - (alpha + beta - 1); zero when the trace scaling balances.
double trace_scaling_residual(const TraceParams& params);

/// 1/q - (1/p + (gamma+alpha+beta)/n - 1); zero when the Riesz scaling balances.
double ddd_scaling_residual(const DddParams& params);

// Throw Error(invalid_argument) on NaN fields or n < 1.
void validate(const CknParams& params);
void validate(const TraceParams& params);
void validate(const DddParams& params);

AdmissibilityReport check_ckn_classical(const CknParams& params, Tolerance tol = {});
AdmissibilityReport check_ckn_radial(const CknParams& params, Tolerance tol = {});
AdmissibilityReport check_trace_radial(const TraceParams& params, Tolerance tol = {});
AdmissibilityReport check_trace_operator(const TraceParams& params, Tolerance tol = {});
AdmissibilityReport check_ddd(const DddParams& params, Tolerance tol = {});

}  // namespace radineq
