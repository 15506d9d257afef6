#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

#include "quadrep/arith.hpp"

namespace quadrep {

/// Positive definite primitive binary quadratic form ax^2 + bxy + cy^2.
///
/// The checked constructor rejects anything else with Error(InvalidForm).
class Form {
 public:
  Form(Int a, Int b, Int c);

  // Skips validation; for forms produced by composition/reduction whose
  // invariants already hold.
  static Form unchecked(Int a, Int b, Int c);

  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  const Int& c() const { return c_; }

  Int discriminant() const { return b_ * b_ - 4 * a_ * c_; }
  Int evaluate(const Int& x, const Int& y) const { return a_ * x * x + b_ * x * y + c_ * y * y; }
  bool is_reduced() const;

  std::string str() const;

  friend bool operator==(const Form& f, const Form& g) {
    return f.a_ == g.a_ && f.b_ == g.b_ && f.c_ == g.c_;
  }
  friend std::strong_ordering operator<=>(const Form& f, const Form& g);

 private:
  struct NoCheck {};
  Form(NoCheck, Int a, Int b, Int c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}

  Int a_, b_, c_;
};

std::ostream& operator<<(std::ostream& os, const Form& f);

/// Parses "a,b,c" (decimal, optional whitespace). Throws Error(InvalidInput).
Form parse_form(std::string_view text);

/// Matrix (p q; r s) with ps - qr = 1, acting on forms by
/// (f o U)(x, y) = f(px + qy, rx + sy).
struct UnimodularTransform {
  Int p = 1, q = 0, r = 0, s = 1;

  static UnimodularTransform identity() { return {}; }

  Int det() const { return p * s - q * r; }
  UnimodularTransform inverse() const { return {s, -q, -r, p}; }
  std::pair<Int, Int> apply(const Int& x, const Int& y) const { return {p * x + q * y, r * x + s * y}; }

  friend UnimodularTransform operator*(const UnimodularTransform& u, const UnimodularTransform& v) {
    return {u.p * v.p + u.q * v.r, u.p * v.q + u.q * v.s, u.r * v.p + u.s * v.r, u.r * v.q + u.s * v.s};
  }
  friend bool operator==(const UnimodularTransform&, const UnimodularTransform&) = default;
};

/// f o U. Preserves the discriminant.
Form act(const Form& f, const UnimodularTransform& u);

struct Reduction;

/// Canonical reduced representative of a class in Cl(D): |b| <= a <= c,
/// b >= 0 when |b| = a or a = c. Equality is tuple equality.
class FormClass {
 public:
  const Form& rep() const { return rep_; }
  Int discriminant() const { return rep_.discriminant(); }

  // Throws Error(UnknownClass) if f is not reduced.
  static FormClass from_reduced(Form f);

  friend bool operator==(const FormClass&, const FormClass&) = default;
  friend std::strong_ordering operator<=>(const FormClass& x, const FormClass& y) { return x.rep_ <=> y.rep_; }

 private:
  friend struct Reduction;
  friend Reduction reduce(const Form&);
  explicit FormClass(Form f) : rep_(std::move(f)) {}
  Form rep_;
};

std::ostream& operator<<(std::ostream& os, const FormClass& c);

struct Reduction {
  FormClass cls;
  UnimodularTransform transform;  // cls.rep() == act(input, transform)
};

Int discriminant(const Form& f);
Reduction reduce(const Form& f);
FormClass reduced_class(const Form& f);

FormClass compose(const FormClass& f, const FormClass& g);
FormClass inverse(const FormClass& f);
FormClass identity_class(const Int& D);
FormClass power(const FormClass& f, std::uint64_t e);

/// U with g == act(f, U). Throws NotEquivalent or DiscriminantMismatch.
UnimodularTransform equiv_transform(const Form& f, const Form& g);

bool valid_discriminant(const Int& D);

}  // namespace quadrep

template <>
struct std::hash<quadrep::FormClass> {
  std::size_t operator()(const quadrep::FormClass& c) const noexcept {
    const auto& f = c.rep();
    std::size_t h = quadrep::hash_value(f.a());
    h = h * 1000003u ^ quadrep::hash_value(f.b());
    h = h * 1000003u ^ quadrep::hash_value(f.c());
    return h;
  }
};
