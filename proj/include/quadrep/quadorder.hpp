#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>

#include "quadrep/arith.hpp"
#include "quadrep/forms.hpp"

namespace quadrep {

/// The order O of discriminant D < 0 inside K = Q(sqrt(d_K)), with
/// D = conductor^2 * d_K. The maximal order is Z[theta],
/// theta = (theta_trace + sqrt(d_K)) / 2.
struct QuadOrderCtx {
  Int D;
  Int fundamental;  // d_K
  Int conductor;
  int theta_trace = 0;  // 0 when d_K = 0 mod 4, 1 when d_K = 1 mod 4

  friend bool operator==(const QuadOrderCtx&, const QuadOrderCtx&) = default;
};

QuadOrderCtx make_context(const Int& D);

/// Element (u + v sqrt(D)) / 2 of O; requires u = vD (mod 2).
struct OrderElement {
  Int u, v;

  friend bool operator==(const OrderElement&, const OrderElement&) = default;
};

OrderElement multiply(const QuadOrderCtx& ctx, const OrderElement& x, const OrderElement& y);
Int norm(const QuadOrderCtx& ctx, const OrderElement& x);

/// Ideal of O with Z-basis {za, (u + v sqrt(D)) / 2} in Hermite normal
/// form: za > 0, v > 0, v | za, u reduced into [0, 2 za). Norm = za * v.
class OIdeal {
 public:
  // Normalizes and checks closure under multiplication by O.
  OIdeal(QuadOrderCtx ctx, Int za, Int u, Int v);

  static OIdeal unit(const QuadOrderCtx& ctx);
  // Hermite normal form of the Z-span of the given elements.
  static OIdeal span(const QuadOrderCtx& ctx, const std::vector<OrderElement>& gens);

  const QuadOrderCtx& ctx() const { return ctx_; }
  const Int& za() const { return za_; }
  const Int& u() const { return u_; }
  const Int& v() const { return v_; }
  Int norm() const { return za_ * v_; }
  bool invertible() const { return gcd(norm(), ctx_.conductor) == 1; }

  OrderElement alpha() const { return {2 * za_, 0}; }
  OrderElement beta() const { return {u_, v_}; }

  std::string str() const;

  friend bool operator==(const OIdeal& x, const OIdeal& y) {
    return x.ctx_.D == y.ctx_.D && x.za_ == y.za_ && x.u_ == y.u_ && x.v_ == y.v_;
  }

 private:
  QuadOrderCtx ctx_;
  Int za_, u_, v_;
};

std::ostream& operator<<(std::ostream& os, const OIdeal& a);

enum class SplitType { Split, Ramified };

struct Inert {};

struct PrimeIdeal {
  OIdeal ideal;
  SplitType type;
};

/// Prime ideal {p, (b_p + sqrt(D))/2} above p, with b_p the least integer
/// in [0, 2p) with b_p = D (mod 2) and b_p^2 = D (mod 4p).
/// Throws Error(ConductorNotCoprime) when p divides the conductor.
std::variant<PrimeIdeal, Inert> prime_ideal_above(const QuadOrderCtx& ctx, const Int& p);

OIdeal conjugate(const OIdeal& a);
OIdeal ideal_multiply(const OIdeal& a, const OIdeal& b);

/// N(x alpha + y beta) / N(a) for the stored basis, before reduction.
Form ideal_form(const OIdeal& a);
FormClass ideal_to_class(const OIdeal& a);

/// (x, y) with f(x, y) = N(a). The class of a must be the class of f.
std::pair<Int, Int> extract_representation(const Form& f, const OIdeal& a);

}  // namespace quadrep
