#include "quadrep/arith.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

#include "quadrep/error.hpp"

namespace quadrep {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidFactorization: return "InvalidFactorization";
    case ErrorCode::InvalidDiscriminant: return "InvalidDiscriminant";
    case ErrorCode::InvalidForm: return "InvalidForm";
    case ErrorCode::DiscriminantMismatch: return "DiscriminantMismatch";
    case ErrorCode::NotEquivalent: return "NotEquivalent";
    case ErrorCode::ConductorNotCoprime: return "ConductorNotCoprime";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::ClassMismatch: return "ClassMismatch";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::NotSquareFree: return "NotSquareFree";
    case ErrorCode::DeskScaleExceeded: return "DeskScaleExceeded";
    case ErrorCode::CapExceeded: return "CapExceeded";
  }
  return "Unknown";
}

namespace {

// (2/n) for odd n, indexed by n mod 8.
constexpr std::array<int, 8> kTwoTable = {0, 1, 0, -1, 0, -1, 0, 1};

unsigned long mod8(const Int& n) { return mpz_fdiv_ui(n.get_mpz_t(), 8); }

bool strong_probable_prime(const Int& n, const Int& base, const Int& d, unsigned s) {
  Int x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const Int n_minus_1 = n - 1;
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

}  // namespace

bool Factorization::square_free() const {
  return std::all_of(primes.begin(), primes.end(), [](const PrimePower& pp) { return pp.e == 1; });
}

int kronecker(const Int& a_in, const Int& n_in) {
  if (n_in == 0) throw std::invalid_argument("kronecker: n must be nonzero");
  Int a = a_in;
  Int b = n_in;

  if (mpz_even_p(a.get_mpz_t()) && mpz_even_p(b.get_mpz_t())) return 0;

  unsigned long v = mpz_scan1(b.get_mpz_t(), 0);
  b >>= v;
  int k = (v % 2 == 0) ? 1 : kTwoTable[mod8(a)];

  if (b < 0) {
    b = -b;
    if (a < 0) k = -k;
  }

  // b is odd and positive from here on.
  while (true) {
    if (a == 0) return b > 1 ? 0 : k;
    v = mpz_scan1(a.get_mpz_t(), 0);
    a >>= v;  // arithmetic shift; a stays exact since the low v bits are zero
    if (v % 2 == 1) k *= kTwoTable[mod8(b)];
    // reciprocity: both congruent to 3 mod 4
    if ((mod8(a) & 3) == 3 && (mod8(b) & 3) == 3) k = -k;
    Int r = abs(a);
    a = floor_mod(b, r);
    b = r;
  }
}

std::optional<Int> sqrt_mod_p(const Int& a_in, const Int& p) {
  const Int a = floor_mod(a_in, p);
  if (a == 0) return Int(0);
  if (p == 2) return a;
  if (kronecker(a, p) != 1) return std::nullopt;

  Int r;
  if (mod8(p) % 4 == 3) {
    const Int e = (p + 1) / 4;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  } else {
    // Tonelli-Shanks with the least quadratic non-residue as auxiliary.
    Int q = p - 1;
    const unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
    q >>= s;

    Int z = 2;
    while (kronecker(z, p) != -1) ++z;

    Int c, t, e;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    e = (q + 1) / 2;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    unsigned long m = s;

    while (t != 1) {
      unsigned long i = 0;
      Int t2 = t;
      while (t2 != 1) {
        t2 = t2 * t2 % p;
        ++i;
      }
      Int b = c;
      for (unsigned long j = 0; j + 1 < m - i; ++j) b = b * b % p;
      m = i;
      c = b * b % p;
      t = t * c % p;
      r = r * b % p;
    }
  }
  if (2 * r > p) r = p - r;
  return r;
}

bool is_prime(const Int& n) {
  static const std::array<unsigned, 29> kBases = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                                  31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                                                  73, 79, 83, 89, 97, 101, 103, 107, 109};
  // 3317044064679887385961981: first strong pseudoprime to all bases <= 41
  static const Int kDeterministicBound("3317044064679887385961981");

  if (n < 2) return false;
  for (unsigned small : kBases) {
    if (n == small) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), small)) return false;
  }

  Int d = n - 1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;

  const std::size_t rounds = n < kDeterministicBound ? 13 : kBases.size();
  for (std::size_t i = 0; i < rounds; ++i) {
    if (!strong_probable_prime(n, Int(kBases[i]), d, static_cast<unsigned>(s))) return false;
  }
  return true;
}

Int isqrt(const Int& n) {
  if (n < 0) throw std::invalid_argument("isqrt: negative argument");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

Int floor_mod(const Int& a, const Int& n) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  if (r < 0) r += abs(n);
  return r;
}

Int ext_gcd(const Int& a, const Int& b, Int& u, Int& v) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

std::optional<std::string> validate_factorization(const Factorization& f) {
  if (f.m < 1) return "m must be positive, got " + f.m.get_str();
  Int product = 1;
  for (std::size_t i = 0; i < f.primes.size(); ++i) {
    const auto& [p, e] = f.primes[i];
    if (e == 0) return "exponent of " + p.get_str() + " is zero";
    if (!is_prime(p)) return "factor " + p.get_str() + " is not prime";
    for (std::size_t j = 0; j < i; ++j) {
      if (f.primes[j].p == p) return "factor " + p.get_str() + " repeated";
    }
    Int pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    product *= pe;
  }
  if (product != f.m) {
    return "product mismatch: factors multiply to " + product.get_str() + ", not " + f.m.get_str();
  }
  return std::nullopt;
}

void require_valid(const Factorization& f) {
  if (auto err = validate_factorization(f)) throw Error(ErrorCode::InvalidFactorization, *err);
}

Factorization make_factorization(const Int& m, std::vector<PrimePower> primes) {
  std::sort(primes.begin(), primes.end(),
            [](const PrimePower& x, const PrimePower& y) { return x.p < y.p; });
  std::vector<PrimePower> merged;
  for (auto& pp : primes) {
    if (!merged.empty() && merged.back().p == pp.p) {
      merged.back().e += pp.e;
    } else {
      merged.push_back(std::move(pp));
    }
  }
  return Factorization{m, std::move(merged)};
}

std::int64_t to_i64(const Int& n) {
  if (!n.fits_slong_p()) throw std::overflow_error("value exceeds 64 bits: " + n.get_str());
  return n.get_si();
}

std::size_t hash_value(const Int& n) noexcept {
  const mpz_srcptr z = n.get_mpz_t();
  std::size_t h = static_cast<std::size_t>(z->_mp_size) * 0x9e3779b97f4a7c15ULL;
  const int limbs = z->_mp_size < 0 ? -z->_mp_size : z->_mp_size;
  for (int i = 0; i < limbs; ++i) {
    h ^= static_cast<std::size_t>(z->_mp_d[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace quadrep
