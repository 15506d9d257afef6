#include "quadrep/forms.hpp"

#include <charconv>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "quadrep/error.hpp"

namespace quadrep {

Form::Form(Int a, Int b, Int c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (a_ <= 0 || discriminant() >= 0) {
    throw Error(ErrorCode::InvalidForm, str() + " is not positive definite");
  }
  Int g = gcd(gcd(a_, b_), c_);
  if (g != 1) throw Error(ErrorCode::InvalidForm, str() + " is not primitive");
}

Form Form::unchecked(Int a, Int b, Int c) { return Form(NoCheck{}, std::move(a), std::move(b), std::move(c)); }

bool Form::is_reduced() const {
  if (abs(b_) > a_ || a_ > c_) return false;
  if ((abs(b_) == a_ || a_ == c_) && b_ < 0) return false;
  return true;
}

std::string Form::str() const { return "(" + a_.get_str() + "," + b_.get_str() + "," + c_.get_str() + ")"; }

std::strong_ordering operator<=>(const Form& f, const Form& g) {
  if (auto c = cmp(f.a_, g.a_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = cmp(f.b_, g.b_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = cmp(f.c_, g.c_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Form& f) { return os << f.str(); }
std::ostream& operator<<(std::ostream& os, const FormClass& c) { return os << c.rep(); }

Form parse_form(std::string_view text) {
  std::vector<Int> parts;
  std::string current;
  auto flush = [&] {
    std::string token;
    for (char ch : current) {
      if (ch != ' ' && ch != '\t') token.push_back(ch);
    }
    if (token.empty()) throw Error(ErrorCode::InvalidInput, "empty coefficient in form '" + std::string(text) + "'");
    Int v;
    if (v.set_str(token[0] == '+' ? token.substr(1) : token, 10) != 0) {
      throw Error(ErrorCode::InvalidInput, "bad coefficient '" + token + "'");
    }
    parts.push_back(v);
    current.clear();
  };
  for (char ch : text) {
    if (ch == ',') {
      flush();
    } else {
      current.push_back(ch);
    }
  }
  flush();
  if (parts.size() != 3) {
    throw Error(ErrorCode::InvalidInput, "form must be 'a,b,c', got '" + std::string(text) + "'");
  }
  return Form(parts[0], parts[1], parts[2]);
}

Form act(const Form& f, const UnimodularTransform& u) {
  const Int& a = f.a();
  const Int& b = f.b();
  const Int& c = f.c();
  return Form::unchecked(f.evaluate(u.p, u.r), 2 * a * u.p * u.q + b * (u.p * u.s + u.q * u.r) + 2 * c * u.r * u.s,
                         f.evaluate(u.q, u.s));
}

FormClass FormClass::from_reduced(Form f) {
  if (!f.is_reduced()) throw Error(ErrorCode::UnknownClass, f.str() + " is not reduced");
  return FormClass(std::move(f));
}

Int discriminant(const Form& f) { return f.discriminant(); }

Reduction reduce(const Form& f) {
  Int a = f.a(), b = f.b(), c = f.c();
  UnimodularTransform u;
  Int q, t;

  while (true) {
    if (!(-a < b && b <= a)) {
      // x -> x + q y brings b into (-a, a]
      t = a - b;
      Int two_a = 2 * a;
      mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), two_a.get_mpz_t());
      c = a * q * q + b * q + c;
      b += two_a * q;
      u.q += u.p * q;
      u.s += u.r * q;
    }
    if (a > c) {
      // (x, y) -> (-y, x)
      std::swap(a, c);
      b = -b;
      UnimodularTransform next{u.q, -u.p, u.s, -u.r};
      u = std::move(next);
      continue;
    }
    break;
  }
  if (a == c && b < 0) {
    b = -b;
    u = UnimodularTransform{u.q, -u.p, u.s, -u.r};
  }
  return Reduction{FormClass(Form::unchecked(std::move(a), std::move(b), std::move(c))), std::move(u)};
}

FormClass reduced_class(const Form& f) { return reduce(f).cls; }

FormClass compose(const FormClass& f1, const FormClass& f2) {
  const Int D = f1.discriminant();
  if (D != f2.discriminant()) {
    throw Error(ErrorCode::DiscriminantMismatch, f1.rep().str() + " and " + f2.rep().str());
  }
  const Form* x = &f1.rep();
  const Form* y = &f2.rep();
  if (x->a() > y->a()) std::swap(x, y);
  const Int& a1 = x->a();
  const Int& b1 = x->b();
  const Int& a2 = y->a();
  const Int& b2 = y->b();
  const Int& c2 = y->c();

  const Int s = (b1 + b2) / 2;
  const Int n = b2 - s;

  Int y1, d;
  if (mpz_divisible_p(a2.get_mpz_t(), a1.get_mpz_t())) {
    y1 = 0;
    d = a1;
  } else {
    Int v;
    d = ext_gcd(a2, a1, y1, v);
  }

  Int x2, y2, d1;
  if (mpz_divisible_p(s.get_mpz_t(), d.get_mpz_t())) {
    y2 = -1;
    x2 = 0;
    d1 = d;
  } else {
    d1 = ext_gcd(s, d, x2, y2);
    y2 = -y2;
  }

  const Int v1 = a1 / d1;
  const Int v2 = a2 / d1;
  const Int r = floor_mod(y1 * y2 * n - x2 * c2, v1);
  Int b3 = b2 + 2 * v2 * r;
  Int a3 = v1 * v2;
  Int c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
  return reduce(Form::unchecked(std::move(a3), std::move(b3), std::move(c3))).cls;
}

FormClass inverse(const FormClass& f) {
  const Form& g = f.rep();
  return reduce(Form::unchecked(g.a(), -g.b(), g.c())).cls;
}

bool valid_discriminant(const Int& D) {
  if (D >= 0) return false;
  const unsigned long r = mpz_fdiv_ui(D.get_mpz_t(), 4);
  return r == 0 || r == 1;
}

FormClass identity_class(const Int& D) {
  if (!valid_discriminant(D)) {
    throw Error(ErrorCode::InvalidDiscriminant, D.get_str() + " is not a negative discriminant");
  }
  if (mpz_divisible_ui_p(D.get_mpz_t(), 4)) return FormClass::from_reduced(Form::unchecked(1, 0, -D / 4));
  return FormClass::from_reduced(Form::unchecked(1, 1, (1 - D) / 4));
}

FormClass power(const FormClass& f, std::uint64_t e) {
  FormClass result = identity_class(f.discriminant());
  FormClass base = f;
  while (e > 0) {
    if (e & 1) result = compose(result, base);
    e >>= 1;
    if (e > 0) base = compose(base, base);
  }
  return result;
}

UnimodularTransform equiv_transform(const Form& f, const Form& g) {
  if (f.discriminant() != g.discriminant()) {
    throw Error(ErrorCode::DiscriminantMismatch, f.str() + " and " + g.str());
  }
  Reduction rf = reduce(f);
  Reduction rg = reduce(g);
  if (rf.cls != rg.cls) {
    throw Error(ErrorCode::NotEquivalent, f.str() + " and " + g.str() + " lie in different classes");
  }
  // rep = f o Uf = g o Ug  =>  g = f o (Uf Ug^-1)
  return rf.transform * rg.transform.inverse();
}

}  // namespace quadrep
