#include "quadrep/quadorder.hpp"

#include <ostream>
#include <stdexcept>

#include "quadrep/error.hpp"

namespace quadrep {

namespace {

int parity(const Int& n) { return mpz_odd_p(n.get_mpz_t()) ? 1 : 0; }

// Coordinates (x, y) with (U + V sqrt(D))/2 = x * za + y * (u + v sqrt(D))/2,
// or nullopt when the element is outside the lattice.
std::optional<std::pair<Int, Int>> lattice_coords(const OIdeal& a, const OrderElement& e) {
  if (!mpz_divisible_p(e.v.get_mpz_t(), a.v().get_mpz_t())) return std::nullopt;
  Int y = e.v / a.v();
  Int rest = e.u - y * a.u();
  Int two_za = 2 * a.za();
  if (!mpz_divisible_p(rest.get_mpz_t(), two_za.get_mpz_t())) return std::nullopt;
  return std::pair<Int, Int>{rest / two_za, std::move(y)};
}

}  // namespace

QuadOrderCtx make_context(const Int& D) {
  if (!valid_discriminant(D)) {
    throw Error(ErrorCode::InvalidDiscriminant, D.get_str() + " must be negative and 0 or 1 mod 4");
  }
  // Largest square dividing D by trial division.
  Int n = abs(D);
  Int square_root_part = 1;
  for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (!mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) continue;
    unsigned e = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      n /= p;
      ++e;
    }
    for (unsigned i = 0; i < e / 2; ++i) square_root_part *= p;
  }

  QuadOrderCtx ctx;
  ctx.D = D;
  Int d0 = D / (square_root_part * square_root_part);  // square-free, negative
  if (mpz_fdiv_ui(d0.get_mpz_t(), 4) == 1) {
    ctx.fundamental = d0;
    ctx.conductor = square_root_part;
    ctx.theta_trace = 1;
  } else {
    ctx.fundamental = 4 * d0;
    ctx.conductor = square_root_part / 2;
    ctx.theta_trace = 0;
  }
  if (ctx.conductor * ctx.conductor * ctx.fundamental != D) {
    throw std::logic_error("make_context: conductor decomposition failed for " + D.get_str());
  }
  return ctx;
}

OrderElement multiply(const QuadOrderCtx& ctx, const OrderElement& x, const OrderElement& y) {
  // ((u1 + v1 w)(u2 + v2 w)) / 4 with w^2 = D, rewritten over the denominator 2
  Int u = x.u * y.u + x.v * y.v * ctx.D;
  Int v = x.u * y.v + x.v * y.u;
  return {u / 2, v / 2};
}

Int norm(const QuadOrderCtx& ctx, const OrderElement& x) { return (x.u * x.u - ctx.D * x.v * x.v) / 4; }

OIdeal::OIdeal(QuadOrderCtx ctx, Int za, Int u, Int v)
    : ctx_(std::move(ctx)), za_(std::move(za)), u_(std::move(u)), v_(std::move(v)) {
  if (v_ < 0) {
    u_ = -u_;
    v_ = -v_;
  }
  za_ = abs(za_);
  if (za_ == 0 || v_ == 0) throw Error(ErrorCode::InvalidInput, "degenerate ideal basis");
  if (parity(u_) != parity(v_ * ctx_.D)) {
    throw Error(ErrorCode::InvalidInput, "(u + v sqrt(D))/2 is not in O for " + str());
  }
  u_ = floor_mod(u_, 2 * za_);

  const OrderElement omega{ctx_.D % 2 == 0 ? Int(0) : Int(1), 1};
  if (!lattice_coords(*this, multiply(ctx_, omega, alpha())) || !lattice_coords(*this, multiply(ctx_, omega, beta()))) {
    throw Error(ErrorCode::InvalidInput, str() + " is not an O-ideal");
  }
}

OIdeal OIdeal::unit(const QuadOrderCtx& ctx) { return OIdeal(ctx, 1, parity(ctx.D), 1); }

OIdeal OIdeal::span(const QuadOrderCtx& ctx, const std::vector<OrderElement>& gens) {
  Int t = 0, v = 0, horizontal = 0;
  for (const auto& g : gens) {
    Int s, w;
    Int gv = ext_gcd(v, g.v, s, w);
    if (gv == 0) {
      horizontal = gcd(horizontal, g.u);
      continue;
    }
    // unimodular (s w; -V/g v/g) applied to the rows (t, v), (U, V)
    Int leftover = (v / gv) * g.u - (g.v / gv) * t;
    t = s * t + w * g.u;
    v = gv;
    horizontal = gcd(horizontal, leftover);
  }
  if (v == 0 || horizontal == 0) throw std::logic_error("OIdeal::span: generators do not span a full lattice");
  return OIdeal(ctx, horizontal / 2, t, v);
}

std::string OIdeal::str() const {
  return "{" + za_.get_str() + ", (" + u_.get_str() + " + " + v_.get_str() + "*sqrt(" + ctx_.D.get_str() + "))/2}";
}

std::ostream& operator<<(std::ostream& os, const OIdeal& a) { return os << a.str(); }

std::variant<PrimeIdeal, Inert> prime_ideal_above(const QuadOrderCtx& ctx, const Int& p) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidInput, p.get_str() + " is not prime");
  if (gcd(p, ctx.conductor) != 1) {
    throw Error(ErrorCode::ConductorNotCoprime, p.get_str() + " divides the conductor " + ctx.conductor.get_str());
  }
  const int symbol = kronecker(ctx.D, p);
  if (symbol == -1) return Inert{};

  const Int four_p = 4 * p;
  const Int target = floor_mod(ctx.D, four_p);
  std::optional<Int> best;
  auto consider = [&](const Int& b) {
    if (b < 0 || b >= 2 * p) return;
    if (parity(b) != parity(ctx.D)) return;
    if (floor_mod(b * b, four_p) != target) return;
    if (!best || b < *best) best = b;
  };
  if (p == 2) {
    for (int b = 0; b < 4; ++b) consider(Int(b));
  } else {
    const Int r = *sqrt_mod_p(floor_mod(ctx.D, p), p);
    for (const Int& b : {Int(r), Int(r + p), Int(p - r), Int(2 * p - r)}) consider(b);
  }
  if (!best) throw std::logic_error("prime_ideal_above: no b_p for p=" + p.get_str());
  return PrimeIdeal{OIdeal(ctx, p, *best, 1), symbol == 1 ? SplitType::Split : SplitType::Ramified};
}

OIdeal conjugate(const OIdeal& a) { return OIdeal(a.ctx(), a.za(), -a.u(), a.v()); }

OIdeal ideal_multiply(const OIdeal& a, const OIdeal& b) {
  if (a.ctx().D != b.ctx().D) throw Error(ErrorCode::DiscriminantMismatch, "ideals from different orders");
  const auto& ctx = a.ctx();
  return OIdeal::span(ctx, {multiply(ctx, a.alpha(), b.alpha()), multiply(ctx, a.alpha(), b.beta()),
                            multiply(ctx, a.beta(), b.alpha()), multiply(ctx, a.beta(), b.beta())});
}

Form ideal_form(const OIdeal& a) {
  if (!a.invertible()) throw Error(ErrorCode::NotInvertible, a.str() + " shares a factor with the conductor");
  // N(x za + y (u + v w)/2) = za^2 x^2 + za u xy + (u^2 - D v^2)/4 y^2, divided by za v
  const Int n = a.norm();
  const Int qa = a.za() * a.za();
  const Int qb = a.za() * a.u();
  const Int qc = (a.u() * a.u() - a.ctx().D * a.v() * a.v()) / 4;
  if (!mpz_divisible_p(qa.get_mpz_t(), n.get_mpz_t()) || !mpz_divisible_p(qb.get_mpz_t(), n.get_mpz_t()) ||
      !mpz_divisible_p(qc.get_mpz_t(), n.get_mpz_t())) {
    throw std::logic_error("ideal_form: norm form of " + a.str() + " is not integral");
  }
  return Form(qa / n, qb / n, qc / n);
}

FormClass ideal_to_class(const OIdeal& a) { return reduce(ideal_form(a)).cls; }

std::pair<Int, Int> extract_representation(const Form& f, const OIdeal& a) {
  const Form fa = ideal_form(a);
  UnimodularTransform u;
  try {
    u = equiv_transform(f, fa);
  } catch (const Error& e) {
    throw Error(ErrorCode::ClassMismatch, "ideal " + a.str() + " is not in the class of " + f.str());
  }
  const Int m = a.norm();
  // m lies in a since a * conj(a) = (m); f_a at its coordinates is N(m)/m = m.
  auto coords = lattice_coords(a, OrderElement{2 * m, 0});
  if (!coords) throw std::logic_error("extract_representation: N(a) has non-integral coordinates in " + a.str());
  auto [x, y] = u.apply(coords->first, coords->second);
  if (f.evaluate(x, y) != m) {
    throw std::logic_error("extract_representation: f(" + x.get_str() + "," + y.get_str() + ") != " + m.get_str());
  }
  return {std::move(x), std::move(y)};
}

}  // namespace quadrep
