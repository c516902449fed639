#pragma once

#include <map>
#include <vector>

#include <Eigen/Core>

namespace heisgeo {

/// Value, gradient and symmetric Hessian of a function at a point.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Exact multivariate polynomial with real coefficients.
///
/// Terms are kept in a map from exponent tuple to coefficient, ordered
/// lexicographically, so iteration (and hence floating-point summation
/// order) is deterministic. Exactly-zero coefficients are never stored.
class Poly {
 public:
  using Exponents = std::vector<int>;
  using TermMap = std::map<Exponents, double>;

  explicit Poly(int nvars);

  static Poly constant(int nvars, double value);
  static Poly variable(int nvars, int index);

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  /// Accumulates `coeff * x^exps` into the polynomial.
  Poly& add_term(const Exponents& exps, double coeff);
  double coefficient(const Exponents& exps) const;

  Poly operator-() const;
  Poly operator+(const Poly& rhs) const;
  Poly operator-(const Poly& rhs) const;
  Poly operator*(const Poly& rhs) const;
  Poly operator*(double s) const;
  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);

  /// Formal partial derivative with respect to variable `var`.
  Poly diff(int var) const;

  /// Integer power by repeated squaring.
  Poly pow(int k) const;

  /// Substitutes `subs[i]` for variable i. All substituted polynomials
  /// must share one variable count, which becomes the result's.
  Poly compose(const std::vector<Poly>& subs) const;

  /// Re-embeds into a polynomial over `new_nvars` variables, variable i
  /// becoming variable `var_map[i]`.
  Poly promote(int new_nvars, const std::vector<int>& var_map) const;

  double eval(const Eigen::VectorXd& x) const;

  /// Value, gradient and Hessian at `x`; the Hessian is assembled from
  /// the upper triangle of formal second derivatives and mirrored.
  Jet2 jet2(const Eigen::VectorXd& x) const;

  bool same_terms(const Poly& rhs, double tol = 0.0) const;

 private:
  int nvars_;
  TermMap terms_;
};

inline Poly operator*(double s, const Poly& p) { return p * s; }

}  // namespace heisgeo
