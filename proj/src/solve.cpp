#include "quadrep/solve.hpp"

#include <stdexcept>

#include "quadrep/error.hpp"

namespace quadrep {

Instance prepare_instance(const Form& f, const Int& m, const Factorization& F) {
  if (F.m != m) throw Error(ErrorCode::InvalidFactorization, "factorization is of " + F.m.get_str() + ", not " + m.get_str());
  require_valid(F);
  if (!F.square_free()) throw Error(ErrorCode::NotSquareFree, m.get_str() + " is not square-free");

  QuadOrderCtx ctx = make_context(f.discriminant());
  if (gcd(m, ctx.conductor) != 1) {
    throw Error(ErrorCode::ConductorNotCoprime,
                "m = " + m.get_str() + " shares a factor with the conductor " + ctx.conductor.get_str());
  }

  Instance inst{ctx, reduced_class(f), {}, {}, std::nullopt};
  for (const auto& [p, e] : F.primes) {
    auto above = prime_ideal_above(ctx, p);
    if (std::holds_alternative<Inert>(above)) {
      inst.inert = p;
      return inst;
    }
    auto& prime = std::get<PrimeIdeal>(above);
    FormClass cls = ideal_to_class(prime.ideal);
    auto& bucket = prime.type == SplitType::Split ? inst.split : inst.ramified;
    bucket.push_back(PrimeData{p, std::move(prime.ideal), std::move(cls)});
  }
  return inst;
}

void reconstruct_solution(const Form& f, const Instance& inst, const std::vector<int>& signs, SolveOutcome& out) {
  if (signs.size() != inst.split.size()) throw std::logic_error("reconstruct_solution: sign vector length mismatch");

  // Ideals are multiplied in ascending prime order.
  std::size_t si = 0, ri = 0;
  OIdeal a = OIdeal::unit(inst.ctx);
  while (si < inst.split.size() || ri < inst.ramified.size()) {
    const bool take_split =
        ri == inst.ramified.size() || (si < inst.split.size() && inst.split[si].p < inst.ramified[ri].p);
    if (take_split) {
      if (signs[si] > 0) {
        a = ideal_multiply(a, inst.split[si].ideal);
      } else {
        a = ideal_multiply(a, conjugate(inst.split[si].ideal));
      }
      ++si;
    } else {
      a = ideal_multiply(a, inst.ramified[ri].ideal);
      ++ri;
    }
  }

  auto [x, y] = extract_representation(f, a);
  out.status = SolveStatus::Solution;
  out.reason = NoSolutionReason::None;
  out.x = std::move(x);
  out.y = std::move(y);
  out.signs = signs;
}

}  // namespace quadrep
