#include "heisgeo/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace heisgeo {

namespace {

double pow_int(double x, int e) {
  // exponentiation by squaring; exact on exactly representable inputs
  double acc = 1.0;
  double base = x;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

}  // namespace

Poly::Poly(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw std::invalid_argument("Poly: nvars must be >= 1");
}

Poly Poly::constant(int nvars, double value) {
  Poly p(nvars);
  p.add_term(Exponents(nvars, 0), value);
  return p;
}

Poly Poly::variable(int nvars, int index) {
  if (index < 0 || index >= nvars)
    throw std::out_of_range("Poly::variable: index out of range");
  Poly p(nvars);
  Exponents e(nvars, 0);
  e[index] = 1;
  p.add_term(e, 1.0);
  return p;
}

int Poly::degree() const {
  int d = 0;
  for (const auto& [exps, c] : terms_)
    d = std::max(d, std::accumulate(exps.begin(), exps.end(), 0));
  return d;
}

Poly& Poly::add_term(const Exponents& exps, double coeff) {
  if (static_cast<int>(exps.size()) != nvars_)
    throw std::invalid_argument("Poly::add_term: exponent tuple length mismatch");
  for (int e : exps)
    if (e < 0) throw std::invalid_argument("Poly::add_term: negative exponent");
  if (coeff == 0.0) return *this;
  auto it = terms_.find(exps);
  if (it == terms_.end()) {
    terms_.emplace(exps, coeff);
  } else {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
  return *this;
}

double Poly::coefficient(const Exponents& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? 0.0 : it->second;
}

Poly Poly::operator-() const {
  Poly r(nvars_);
  for (const auto& [exps, c] : terms_) r.terms_.emplace(exps, -c);
  return r;
}

Poly Poly::operator+(const Poly& rhs) const {
  Poly r = *this;
  r += rhs;
  return r;
}

Poly Poly::operator-(const Poly& rhs) const {
  Poly r = *this;
  r -= rhs;
  return r;
}

Poly& Poly::operator+=(const Poly& rhs) {
  if (rhs.nvars_ != nvars_)
    throw std::invalid_argument("Poly: variable count mismatch");
  for (const auto& [exps, c] : rhs.terms_) add_term(exps, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  if (rhs.nvars_ != nvars_)
    throw std::invalid_argument("Poly: variable count mismatch");
  for (const auto& [exps, c] : rhs.terms_) add_term(exps, -c);
  return *this;
}

Poly Poly::operator*(const Poly& rhs) const {
  if (rhs.nvars_ != nvars_)
    throw std::invalid_argument("Poly: variable count mismatch");
  Poly r(nvars_);
  Exponents prod(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      for (int i = 0; i < nvars_; ++i) prod[i] = ea[i] + eb[i];
      r.add_term(prod, ca * cb);
    }
  }
  return r;
}

Poly Poly::operator*(double s) const {
  Poly r(nvars_);
  if (s == 0.0) return r;
  for (const auto& [exps, c] : terms_) r.terms_.emplace(exps, c * s);
  return r;
}

Poly Poly::diff(int var) const {
  if (var < 0 || var >= nvars_)
    throw std::out_of_range("Poly::diff: variable index out of range");
  Poly r(nvars_);
  for (const auto& [exps, c] : terms_) {
    if (exps[var] == 0) continue;
    Exponents e = exps;
    const int k = e[var]--;
    r.add_term(e, c * k);
  }
  return r;
}

Poly Poly::pow(int k) const {
  if (k < 0) throw std::invalid_argument("Poly::pow: negative exponent");
  Poly acc = Poly::constant(nvars_, 1.0);
  Poly base = *this;
  while (k > 0) {
    if (k & 1) acc = acc * base;
    if (k >>= 1) base = base * base;
  }
  return acc;
}

Poly Poly::compose(const std::vector<Poly>& subs) const {
  if (static_cast<int>(subs.size()) != nvars_)
    throw std::invalid_argument("Poly::compose: one substitution per variable required");
  const int m = subs.front().nvars();
  for (const Poly& s : subs)
    if (s.nvars() != m)
      throw std::invalid_argument("Poly::compose: substitutions disagree on variable count");
  Poly r(m);
  for (const auto& [exps, c] : terms_) {
    Poly term = Poly::constant(m, c);
    for (int i = 0; i < nvars_; ++i)
      if (exps[i] > 0) term = term * subs[i].pow(exps[i]);
    r += term;
  }
  return r;
}

Poly Poly::promote(int new_nvars, const std::vector<int>& var_map) const {
  if (static_cast<int>(var_map.size()) != nvars_)
    throw std::invalid_argument("Poly::promote: var_map length mismatch");
  for (int v : var_map)
    if (v < 0 || v >= new_nvars)
      throw std::out_of_range("Poly::promote: mapped index out of range");
  Poly r(new_nvars);
  Exponents e(new_nvars);
  for (const auto& [exps, c] : terms_) {
    std::fill(e.begin(), e.end(), 0);
    for (int i = 0; i < nvars_; ++i) e[var_map[i]] += exps[i];
    r.add_term(e, c);
  }
  return r;
}

double Poly::eval(const Eigen::VectorXd& x) const {
  if (x.size() != nvars_)
    throw std::invalid_argument("Poly::eval: point dimension mismatch");
  double acc = 0.0;
  for (const auto& [exps, c] : terms_) {
    double term = c;
    for (int i = 0; i < nvars_; ++i)
      if (exps[i] > 0) term *= pow_int(x[i], exps[i]);
    acc += term;
  }
  return acc;
}

Jet2 Poly::jet2(const Eigen::VectorXd& x) const {
  if (x.size() != nvars_)
    throw std::invalid_argument("Poly::jet2: point dimension mismatch");
  Jet2 jet;
  jet.value = eval(x);
  jet.gradient.resize(nvars_);
  jet.hessian.resize(nvars_, nvars_);
  for (int i = 0; i < nvars_; ++i) {
    const Poly di = diff(i);
    jet.gradient[i] = di.eval(x);
    for (int j = i; j < nvars_; ++j) {
      const double hij = di.diff(j).eval(x);
      jet.hessian(i, j) = hij;
      jet.hessian(j, i) = hij;
    }
  }
  return jet;
}

bool Poly::same_terms(const Poly& rhs, double tol) const {
  if (rhs.nvars_ != nvars_) return false;
  const Poly d = *this - rhs;
  for (const auto& [exps, c] : d.terms())
    if (std::abs(c) > tol) return false;
  return true;
}

}  // namespace heisgeo
