#include "quadrep/solver_dp.hpp"

#include <stdexcept>
#include <unordered_map>

namespace quadrep {

namespace {

struct Parent {
  std::int64_t prev;
  int sign;
};

}  // namespace

std::optional<std::vector<int>> signed_subset_sum(const ClassGroupStructure& G, const std::vector<GroupVector>& v,
                                                  const GroupVector& target, std::uint64_t& states_visited) {
  const std::size_t r = v.size();
  std::vector<std::unordered_map<std::int64_t, Parent>> layers(r + 1);
  layers[0].emplace(G.index_of(G.zero()), Parent{-1, 0});
  states_visited = 1;

  for (std::size_t i = 0; i < r; ++i) {
    const GroupVector neg = G.negate(v[i]);
    auto& next = layers[i + 1];
    next.reserve(std::min<std::size_t>(2 * layers[i].size(), static_cast<std::size_t>(G.h())));
    for (const auto& [key, _] : layers[i]) {
      const GroupVector s = G.vector_at(key);
      next.try_emplace(G.index_of(G.add(s, v[i])), Parent{key, +1});
      next.try_emplace(G.index_of(G.add(s, neg)), Parent{key, -1});
    }
    states_visited += next.size();
  }

  std::int64_t cur = G.index_of(target);
  if (!layers[r].contains(cur)) return std::nullopt;

  std::vector<int> signs(r);
  for (std::size_t i = r; i > 0; --i) {
    const Parent& link = layers[i].at(cur);
    signs[i - 1] = link.sign;
    cur = link.prev;
  }
  return signs;
}

SolveOutcome solve_dp(const Form& f, const Int& m, const Factorization& F, std::int64_t max_h) {
  Instance inst = prepare_instance(f, m, F);
  SolveOutcome out;
  if (inst.inert) {
    out.reason = NoSolutionReason::InertPrime;
    out.witness_prime = *inst.inert;
    return out;
  }

  auto G = cached_structure(inst.ctx.D, max_h);

  std::vector<GroupVector> v;
  v.reserve(inst.split.size());
  for (const auto& prime : inst.split) v.push_back(G->dlog(prime.cls));

  // T = [f] - sum over ramified primes
  GroupVector target = G->dlog(inst.target);
  for (const auto& prime : inst.ramified) target = G->sub(target, G->dlog(prime.cls));

  auto signs = signed_subset_sum(*G, v, target, out.counters.states_visited);
  if (!signs) {
    out.reason = NoSolutionReason::NoSignVector;
    return out;
  }

  GroupVector check = G->zero();
  for (std::size_t i = 0; i < v.size(); ++i) check = G->add(check, (*signs)[i] > 0 ? v[i] : G->negate(v[i]));
  if (check != target) throw std::logic_error("solve_dp: backtracked signs do not reach the target");

  reconstruct_solution(f, inst, *signs, out);
  return out;
}

}  // namespace quadrep
