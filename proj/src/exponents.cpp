#include "radineq/exponents.hpp"

#include <cmath>
#include <limits>

#include "radineq/error.hpp"

namespace radineq {
namespace {

// Conjugate exponent; p == 1 maps to infinity, so 1/p' is computed directly.
double inv_conjugate(double p) { return 1.0 - 1.0 / p; }

class ReportBuilder {
 public:
  ReportBuilder(Theorem theorem, Tolerance tol) : tol_(tol) { report_.theorem = theorem; }

  void ge(std::string label, double lhs, double rhs) {
    const double res = lhs - rhs;
    add(std::move(label), res >= -tol_.abs, res);
  }
  void gt(std::string label, double lhs, double rhs) {
    const double res = lhs - rhs;
    add(std::move(label), res > tol_.abs, res);
  }
  void eq(std::string label, double lhs, double rhs) {
    const double res = -std::abs(lhs - rhs);
    add(std::move(label), res >= -tol_.abs, res);
  }
  void vacuous(std::string label) {
    report_.conditions.push_back({std::move(label), true, 0.0, true});
  }

  AdmissibilityReport finish() && { return std::move(report_); }

 private:
  void add(std::string label, bool ok, double res) {
    report_.conditions.push_back({std::move(label), ok, res, false});
    report_.verdict = report_.verdict && ok;
  }

  Tolerance tol_;
  AdmissibilityReport report_;
};

void require_finite(std::initializer_list<double> values) {
  for (double v : values) {
    if (std::isnan(v)) fail(ErrorCode::invalid_argument, "exponent is NaN");
  }
}

void require_dimension(int n) {
  if (n < 1) fail(ErrorCode::invalid_argument, "dimension n must be >= 1");
}

void add_basic_ckn(ReportBuilder& b, const CknParams& c) {
  b.ge("p>=1", c.p, 1.0);
  b.ge("q>=1", c.q, 1.0);
  b.gt("r>0", c.r, 0.0);
  b.ge("a>=0", c.a, 0.0);
  b.ge("a<=1", 1.0, c.a);
  const double n = c.n;
  b.gt("1/p+alpha/n>0", 1.0 / c.p + c.alpha / n, 0.0);
  b.gt("1/q+beta/n>0", 1.0 / c.q + c.beta / n, 0.0);
  b.gt("1/r+gamma/n>0", 1.0 / c.r + c.gamma / n, 0.0);
}

}  // namespace

std::string_view theorem_name(Theorem t) {
  switch (t) {
    case Theorem::ckn_classical: return "ckn-classical";
    case Theorem::ckn_radial: return "ckn-radial";
    case Theorem::trace_radial: return "trace";
    case Theorem::trace_operator: return "trace-operator";
    case Theorem::ddd: return "ddd";
  }
  return "unknown";
}

const Condition* AdmissibilityReport::find(std::string_view label) const {
  for (const auto& c : conditions) {
    if (c.label == label) return &c;
  }
  return nullptr;
}

std::vector<std::string> AdmissibilityReport::failing() const {
  std::vector<std::string> out;
  for (const auto& c : conditions) {
    if (!c.satisfied) out.push_back(c.label);
  }
  return out;
}

CknParams CknParams::with_derived_sigma(int n, double p, double q, double r, double a,
                                        double alpha, double beta, double gamma) {
  CknParams c{n, p, q, r, a, alpha, beta, gamma, 0.0};
  if (a > 0.0) c.sigma = derive_sigma(a, gamma, beta);
  return c;
}

double derive_sigma(double a, double gamma, double beta) {
  require_finite({a, gamma, beta});
  if (a == 0.0) fail(ErrorCode::domain, "sigma undetermined at a=0");
  return (gamma - (1.0 - a) * beta) / a;
}

double scaling_residual(const CknParams& c) {
  const double n = c.n;
  return (1.0 / c.r + c.gamma / n) - c.a * (1.0 / c.p + (c.alpha - 1.0) / n) -
         (1.0 - c.a) * (1.0 / c.q + c.beta / n);
}

double trace_scaling_residual(const TraceParams& t) {
  const double n = t.n;
  return n / t.q - (n + 1.0) / t.p - (t.alpha + t.beta - 1.0);
}

double ddd_scaling_residual(const DddParams& d) {
  return 1.0 / d.q - (1.0 / d.p + (d.gamma + d.alpha + d.beta) / d.n - 1.0);
}

void validate(const CknParams& c) {
  require_dimension(c.n);
  require_finite({c.p, c.q, c.r, c.a, c.alpha, c.beta, c.gamma, c.sigma});
}

void validate(const TraceParams& t) {
  require_dimension(t.n);
  require_finite({t.p, t.q, t.alpha, t.beta});
}

void validate(const DddParams& d) {
  require_dimension(d.n);
  require_finite({d.p, d.q, d.alpha, d.beta, d.gamma});
}

AdmissibilityReport check_ckn_classical(const CknParams& c, Tolerance tol) {
  validate(c);
  ReportBuilder b(Theorem::ckn_classical, tol);
  add_basic_ckn(b, c);
  if (c.a > 0.0) {
    b.eq("gamma=a*sigma+(1-a)*beta", c.gamma, c.a * c.sigma + (1.0 - c.a) * c.beta);
  } else {
    b.vacuous("gamma=a*sigma+(1-a)*beta");
  }
  b.eq("scaling", scaling_residual(c), 0.0);

  const double n = c.n;
  if (c.a > 0.0) {
    b.ge("alpha-sigma>=0", c.alpha - c.sigma, 0.0);
    const double grad_side = 1.0 / c.p + (c.alpha - 1.0) / n;
    const double target_side = 1.0 / c.r + c.gamma / n;
    if (std::abs(grad_side - target_side) <= tol.abs) {
      b.ge("alpha-sigma<=1", 1.0, c.alpha - c.sigma);
    } else {
      b.vacuous("alpha-sigma<=1");
    }
  } else {
    b.vacuous("alpha-sigma>=0");
    b.vacuous("alpha-sigma<=1");
  }
  return std::move(b).finish();
}

AdmissibilityReport check_ckn_radial(const CknParams& c, Tolerance tol) {
  validate(c);
  ReportBuilder b(Theorem::ckn_radial, tol);
  add_basic_ckn(b, c);
  if (c.a > 0.0) {
    b.eq("gamma=a*sigma+(1-a)*beta", c.gamma, c.a * c.sigma + (1.0 - c.a) * c.beta);
  } else {
    b.vacuous("gamma=a*sigma+(1-a)*beta");
  }
  b.eq("scaling", scaling_residual(c), 0.0);

  // Bounds on 1/r; at a == 0 together they force r == q.
  b.ge("(1-a)/q<=1/r", 1.0 / c.r, (1.0 - c.a) / c.q);
  b.ge("1/r<=a/p+(1-a)/q", c.a / c.p + (1.0 - c.a) / c.q, 1.0 / c.r);

  if (c.a > 0.0) {
    const double n = c.n;
    // When a == 1 the q terms cancel identically; they are still evaluated.
    const double shifted = (1.0 / c.a) * (1.0 / c.r - 1.0 / c.q) + 1.0 / c.q;
    const double lower = (n - 1.0) * (shifted - 1.0 / c.p);
    const double gap = c.alpha - c.sigma;
    if (c.p == 1.0) {
      b.gt("alpha-sigma>=lower", gap, lower);
    } else {
      b.ge("alpha-sigma>=lower", gap, lower);
    }
    b.ge("alpha-sigma<=0", 0.0, gap);
    b.gt("-sigma/n<(1/r-1/q)/a+1/q", shifted, -c.sigma / n);
  } else {
    b.vacuous("alpha-sigma>=lower");
    b.vacuous("alpha-sigma<=0");
    b.vacuous("-sigma/n<(1/r-1/q)/a+1/q");
  }
  return std::move(b).finish();
}

AdmissibilityReport check_trace_radial(const TraceParams& t, Tolerance tol) {
  validate(t);
  ReportBuilder b(Theorem::trace_radial, tol);
  const double n = t.n;
  const double sum = t.alpha + t.beta;
  b.ge("alpha+beta>=-n/q'", sum, -n * inv_conjugate(t.q));
  b.ge("alpha+beta<=1/p'", inv_conjugate(t.p), sum);
  b.gt("alpha>-(n+1)/p+1", t.alpha, -(n + 1.0) / t.p + 1.0);
  b.eq("scaling", trace_scaling_residual(t), 0.0);
  // Equivalent to the two bounds on alpha+beta once the scaling relation holds.
  b.ge("p>=1", t.p, 1.0);
  b.ge("p<=q", t.q, t.p);
  b.gt("q<inf", std::isinf(t.q) ? 0.0 : 1.0, 0.0);
  return std::move(b).finish();
}

AdmissibilityReport check_trace_operator(const TraceParams& t, Tolerance tol) {
  validate(t);
  ReportBuilder b(Theorem::trace_operator, tol);
  const double n = t.n;
  b.ge("p>=1", t.p, 1.0);
  b.ge("p<=q", t.q, t.p);
  b.gt("q<inf", std::isinf(t.q) ? 0.0 : 1.0, 0.0);
  b.eq("scaling", trace_scaling_residual(t), 0.0);
  b.gt("beta>-n/q'", t.beta, -n * inv_conjugate(t.q));
  b.gt("beta<n/q", n / t.q, t.beta);
  return std::move(b).finish();
}

AdmissibilityReport check_ddd(const DddParams& d, Tolerance tol) {
  validate(d);
  ReportBuilder b(Theorem::ddd, tol);
  const double n = d.n;
  b.ge("p>=1", d.p, 1.0);
  b.ge("p<=q", d.q, d.p);
  b.gt("q<inf", std::isinf(d.q) ? 0.0 : 1.0, 0.0);
  b.gt("alpha<n/p'", n * inv_conjugate(d.p), d.alpha);
  b.gt("beta<n/q", n / d.q, d.beta);
  const double lower = (n - 1.0) * (1.0 / d.q - 1.0 / d.p);
  if (d.p == 1.0) {
    b.gt("alpha+beta>=(n-1)(1/q-1/p)", d.alpha + d.beta, lower);
  } else {
    b.ge("alpha+beta>=(n-1)(1/q-1/p)", d.alpha + d.beta, lower);
  }
  b.eq("scaling", ddd_scaling_residual(d), 0.0);
  b.gt("gamma>0", d.gamma, 0.0);
  b.gt("gamma<n", n, d.gamma);
  return std::move(b).finish();
}

}  // namespace radineq
