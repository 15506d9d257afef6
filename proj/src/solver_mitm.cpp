#include "quadrep/solver_mitm.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "quadrep/error.hpp"

namespace quadrep {

namespace {

constexpr std::size_t kMaxHalf = 40;

enum class Lookup { Sorted, Hashed };

std::vector<int> unpack(std::uint64_t signs, std::size_t n) {
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = ((signs >> i) & 1) ? -1 : +1;
  return out;
}

SolveOutcome solve_mitm_impl(const Form& f, const Int& m, const Factorization& F, Lookup mode) {
  Instance inst = prepare_instance(f, m, F);
  SolveOutcome out;
  if (inst.inert) {
    out.reason = NoSolutionReason::InertPrime;
    out.witness_prime = *inst.inert;
    return out;
  }
  auto& count = out.counters;
  const FormClass one = identity_class(inst.ctx.D);

  // [G] = product of ramified classes, [H] = [f][G]^-1
  FormClass ram = one;
  for (const auto& prime : inst.ramified) {
    ram = compose(ram, prime.cls);
    ++count.compositions;
  }
  const FormClass H = compose(inst.target, inverse(ram));
  ++count.compositions;

  const std::size_t r = inst.split.size();
  const std::size_t r1 = (r + 1) / 2;
  if (r1 > kMaxHalf) throw Error(ErrorCode::CapExceeded, std::to_string(r) + " split primes is beyond the MITM range");

  std::vector<FormClass> s1, s2;
  for (std::size_t i = 0; i < r; ++i) (i < r1 ? s1 : s2).push_back(inst.split[i].cls);

  std::vector<SignedProductEntry> l1 = signed_products(s1, one, count.compositions);
  std::vector<SignedProductEntry> l2 = signed_products(s2, one, count.compositions);

  std::optional<std::pair<std::uint64_t, std::uint64_t>> hit;
  if (mode == Lookup::Sorted) {
    // lexicographic by (a, b, c); first sign vector per class is kept
    std::stable_sort(l1.begin(), l1.end(),
                     [](const SignedProductEntry& x, const SignedProductEntry& y) { return x.cls < y.cls; });
    l1.erase(std::unique(l1.begin(), l1.end(),
                         [](const SignedProductEntry& x, const SignedProductEntry& y) { return x.cls == y.cls; }),
             l1.end());
    for (const auto& entry : l2) {
      const FormClass want = compose(H, inverse(entry.cls));
      ++count.compositions;
      ++count.lookups;
      auto it = std::lower_bound(l1.begin(), l1.end(), want,
                                 [](const SignedProductEntry& x, const FormClass& c) { return x.cls < c; });
      if (it != l1.end() && it->cls == want) {
        hit.emplace(it->signs, entry.signs);
        break;
      }
    }
  } else {
    std::unordered_map<FormClass, std::uint64_t> table;
    table.reserve(l1.size());
    for (auto& entry : l1) table.try_emplace(std::move(entry.cls), entry.signs);
    for (const auto& entry : l2) {
      const FormClass want = compose(H, inverse(entry.cls));
      ++count.compositions;
      ++count.lookups;
      if (auto it = table.find(want); it != table.end()) {
        hit.emplace(it->second, entry.signs);
        break;
      }
    }
  }

  if (!hit) {
    out.reason = NoSolutionReason::NoSignVector;
    return out;
  }

  std::vector<int> signs = unpack(hit->first, s1.size());
  const std::vector<int> tail = unpack(hit->second, s2.size());
  signs.insert(signs.end(), tail.begin(), tail.end());

  // [f] = [G] ([H][F]^-1) [F], recomputed from the sign vector
  FormClass check = ram;
  for (std::size_t i = 0; i < r; ++i) {
    check = compose(check, signs[i] > 0 ? inst.split[i].cls : inverse(inst.split[i].cls));
    ++count.compositions;
  }
  if (check != inst.target) throw std::logic_error("solve_mitm: matched sign vector does not reproduce [f]");

  reconstruct_solution(f, inst, signs, out);
  return out;
}

}  // namespace

std::vector<SignedProductEntry> signed_products(const std::vector<FormClass>& classes, const FormClass& identity,
                                                std::uint64_t& compositions) {
  std::vector<SignedProductEntry> list{{identity, 0}};
  list.reserve(std::size_t{1} << classes.size());
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const FormClass inv = inverse(classes[k]);
    const std::size_t n = list.size();
    for (std::size_t i = 0; i < n; ++i) {
      list.push_back({compose(list[i].cls, inv), list[i].signs | (std::uint64_t{1} << k)});
      list[i].cls = compose(list[i].cls, classes[k]);
    }
    compositions += 2 * n;
  }
  return list;
}

SolveOutcome solve_mitm(const Form& f, const Int& m, const Factorization& F) {
  return solve_mitm_impl(f, m, F, Lookup::Sorted);
}

SolveOutcome solve_mitm_hashed(const Form& f, const Int& m, const Factorization& F) {
  return solve_mitm_impl(f, m, F, Lookup::Hashed);
}

}  // namespace quadrep
