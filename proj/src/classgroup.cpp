#include "quadrep/classgroup.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "quadrep/error.hpp"

namespace quadrep {

namespace {

using Matrix = std::vector<std::vector<Int>>;

Matrix identity_matrix(std::size_t k) {
  Matrix m(k, std::vector<Int>(k, 0));
  for (std::size_t i = 0; i < k; ++i) m[i][i] = 1;
  return m;
}

// Smith normal form of a square relation matrix. On return rel is diagonal
// with d_1 | d_2 | ..., and v / v_inv hold the accumulated column
// operations and their inverse.
void smith_normal_form(Matrix& rel, Matrix& v, Matrix& v_inv) {
  const std::size_t k = rel.size();
  v = identity_matrix(k);
  v_inv = identity_matrix(k);

  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& row : rel) std::swap(row[i], row[j]);
    for (auto& row : v) std::swap(row[i], row[j]);
    std::swap(v_inv[i], v_inv[j]);
  };
  // col_j -= q * col_t
  auto col_sub = [&](std::size_t j, std::size_t t, const Int& q) {
    if (q == 0) return;
    for (auto& row : rel) row[j] -= q * row[t];
    for (auto& row : v) row[j] -= q * row[t];
    for (std::size_t c = 0; c < k; ++c) v_inv[t][c] += q * v_inv[j][c];
  };
  auto row_sub = [&](std::size_t i, std::size_t t, const Int& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < k; ++c) rel[i][c] -= q * rel[t][c];
  };

  for (std::size_t t = 0; t < k; ++t) {
    while (true) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pi = k, pj = k;
      for (std::size_t i = t; i < k; ++i) {
        for (std::size_t j = t; j < k; ++j) {
          if (rel[i][j] != 0 && (pi == k || abs(rel[i][j]) < abs(rel[pi][pj]))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == k) return;  // remaining block is zero
      std::swap(rel[t], rel[pi]);
      swap_cols(t, pj);

      bool clean = true;
      Int q;
      for (std::size_t i = t + 1; i < k; ++i) {
        mpz_fdiv_q(q.get_mpz_t(), rel[i][t].get_mpz_t(), rel[t][t].get_mpz_t());
        row_sub(i, t, q);
        if (rel[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < k; ++j) {
        mpz_fdiv_q(q.get_mpz_t(), rel[t][j].get_mpz_t(), rel[t][t].get_mpz_t());
        col_sub(j, t, q);
        if (rel[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      bool divides = true;
      for (std::size_t i = t + 1; i < k && divides; ++i) {
        for (std::size_t j = t + 1; j < k; ++j) {
          if (!mpz_divisible_p(rel[i][j].get_mpz_t(), rel[t][t].get_mpz_t())) {
            for (std::size_t c = 0; c < k; ++c) rel[t][c] += rel[i][c];
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    if (rel[t][t] < 0) {
      for (std::size_t c = 0; c < k; ++c) rel[t][c] = -rel[t][c];
    }
  }
}

}  // namespace

std::vector<FormClass> enumerate_reduced_forms(const Int& D) {
  if (!valid_discriminant(D)) {
    throw Error(ErrorCode::InvalidDiscriminant, D.get_str() + " must be negative and 0 or 1 mod 4");
  }
  if (!D.fits_slong_p() || D < -(Int(1) << 60)) {
    throw Error(ErrorCode::DeskScaleExceeded, "discriminant " + D.get_str() + " is too large to enumerate");
  }
  const std::int64_t d = D.get_si();
  std::vector<FormClass> out;
  for (std::int64_t b = (d & 1) ? 1 : 0; 3 * b * b <= -d; b += 2) {
    const std::int64_t n = (b * b - d) / 4;
    for (std::int64_t a = std::max<std::int64_t>(b, 1); a * a <= n; ++a) {
      if (n % a != 0) continue;
      const std::int64_t c = n / a;
      if (std::gcd(std::gcd(a, b), c) != 1) continue;
      out.push_back(FormClass::from_reduced(Form::unchecked(a, b, c)));
      if (b > 0 && b < a && a < c) out.push_back(FormClass::from_reduced(Form::unchecked(a, -b, c)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

GroupVector ClassGroupStructure::dlog(const FormClass& c) const {
  auto it = dlog_index_.find(c);
  if (it == dlog_index_.end()) {
    throw Error(ErrorCode::UnknownClass, c.rep().str() + " is not a class of discriminant " + D_.get_str());
  }
  return vector_at(it->second);
}

GroupVector ClassGroupStructure::add(const GroupVector& x, const GroupVector& y) const {
  GroupVector r = x;
  for (std::size_t k = 0; k < orders_.size(); ++k) r.coords[k] = (x.coords[k] + y.coords[k]) % orders_[k];
  return r;
}

GroupVector ClassGroupStructure::negate(const GroupVector& x) const {
  GroupVector r = x;
  for (std::size_t k = 0; k < orders_.size(); ++k) r.coords[k] = (orders_[k] - x.coords[k]) % orders_[k];
  return r;
}

GroupVector ClassGroupStructure::sub(const GroupVector& x, const GroupVector& y) const { return add(x, negate(y)); }

std::int64_t ClassGroupStructure::index_of(const GroupVector& x) const {
  std::int64_t idx = 0, radix = 1;
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    idx += x.coords[k] * radix;
    radix *= orders_[k];
  }
  return idx;
}

GroupVector ClassGroupStructure::vector_at(std::int64_t index) const {
  GroupVector r = zero();
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    r.coords[k] = index % orders_[k];
    index /= orders_[k];
  }
  return r;
}

FormClass ClassGroupStructure::evaluate(const GroupVector& x) const {
  FormClass acc = identity_class(D_);
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    acc = compose(acc, power(gens_[k], static_cast<std::uint64_t>(x.coords[k])));
  }
  return acc;
}

ClassGroupStructure compute_structure(const Int& D, std::int64_t max_h) {
  ClassGroupStructure G;
  G.D_ = D;
  G.classes_ = enumerate_reduced_forms(D);
  const auto h = static_cast<std::int64_t>(G.classes_.size());
  if (h > max_h) {
    throw Error(ErrorCode::DeskScaleExceeded,
                "h(" + D.get_str() + ") = " + std::to_string(h) + " exceeds the cap " + std::to_string(max_h));
  }

  std::unordered_map<FormClass, std::int64_t> index;
  index.reserve(static_cast<std::size_t>(h));
  for (std::int64_t i = 0; i < h; ++i) index.emplace(G.classes_[static_cast<std::size_t>(i)], i);
  auto idx = [&](const FormClass& c) { return index.at(c); };

  // Grow the subgroup H one element at a time: the first class outside H
  // (lexicographically) joins the generating set, with its order in G/H
  // giving one relation. raw[i] = exponents of class i in the raw gens.
  std::vector<std::vector<std::int64_t>> raw(static_cast<std::size_t>(h));
  std::vector<char> in_h(static_cast<std::size_t>(h), 0);
  std::vector<std::int64_t> members;
  const FormClass one = identity_class(D);
  members.push_back(idx(one));
  in_h[static_cast<std::size_t>(members[0])] = 1;

  std::vector<FormClass> raw_gens;
  std::vector<std::vector<std::int64_t>> relations;  // rows, padded later

  for (std::int64_t cand = 0; cand < h && static_cast<std::int64_t>(members.size()) < h; ++cand) {
    if (in_h[static_cast<std::size_t>(cand)]) continue;
    const FormClass& x = G.classes_[static_cast<std::size_t>(cand)];

    FormClass pw = x;
    std::int64_t n = 1;
    while (!in_h[static_cast<std::size_t>(idx(pw))]) {
      pw = compose(pw, x);
      ++n;
    }
    std::vector<std::int64_t> rel = raw[static_cast<std::size_t>(idx(pw))];
    for (auto& e : rel) e = -e;
    rel.push_back(n);
    relations.push_back(std::move(rel));

    const std::size_t old_size = members.size();
    for (std::size_t i = 0; i < old_size; ++i) raw[static_cast<std::size_t>(members[i])].push_back(0);
    FormClass xj = one;
    for (std::int64_t j = 1; j < n; ++j) {
      xj = compose(xj, x);
      for (std::size_t i = 0; i < old_size; ++i) {
        const std::int64_t m = members[i];
        const std::int64_t e = idx(compose(G.classes_[static_cast<std::size_t>(m)], xj));
        auto coords = raw[static_cast<std::size_t>(m)];
        coords.back() = j;
        raw[static_cast<std::size_t>(e)] = std::move(coords);
        in_h[static_cast<std::size_t>(e)] = 1;
        members.push_back(e);
      }
    }
    raw_gens.push_back(x);
  }
  if (static_cast<std::int64_t>(members.size()) != h) {
    throw std::logic_error("compute_structure: generated subgroup is smaller than the class group");
  }

  const std::size_t k = raw_gens.size();
  Matrix rel(k, std::vector<Int>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < relations[i].size(); ++j) rel[i][j] = relations[i][j];
  }
  Matrix v, v_inv;
  smith_normal_form(rel, v, v_inv);

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < k; ++i) {
    if (rel[i][i] != 1) kept.push_back(i);
  }
  for (std::size_t i : kept) {
    G.orders_.push_back(to_i64(rel[i][i]));
    FormClass g = one;
    for (std::size_t j = 0; j < k; ++j) {
      const Int e = floor_mod(v_inv[i][j], Int(h));
      g = compose(g, power(raw_gens[j], e.get_ui()));
    }
    G.gens_.push_back(std::move(g));
  }

  G.dlog_index_.reserve(static_cast<std::size_t>(h));
  GroupVector y = G.zero();
  for (std::int64_t c = 0; c < h; ++c) {
    const auto& x = raw[static_cast<std::size_t>(c)];
    for (std::size_t t = 0; t < kept.size(); ++t) {
      Int acc = 0;
      for (std::size_t j = 0; j < k; ++j) acc += x[j] * v[j][kept[t]];
      y.coords[t] = to_i64(floor_mod(acc, Int(G.orders_[t])));
    }
    G.dlog_index_.emplace(G.classes_[static_cast<std::size_t>(c)], G.index_of(y));
  }
  return G;
}

GroupVector class_dlog(const ClassGroupStructure& G, const FormClass& c) { return G.dlog(c); }

std::shared_ptr<const ClassGroupStructure> cached_structure(const Int& D, std::int64_t max_h) {
  struct Slot {
    std::once_flag once;
    std::shared_ptr<const ClassGroupStructure> value;
    std::exception_ptr error;
  };
  static std::mutex mutex;
  static std::map<std::pair<std::string, std::int64_t>, std::shared_ptr<Slot>> cache;

  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(mutex);
    auto& entry = cache[{D.get_str(), max_h}];
    if (!entry) entry = std::make_shared<Slot>();
    slot = entry;
  }
  std::call_once(slot->once, [&] {
    try {
      slot->value = std::make_shared<const ClassGroupStructure>(compute_structure(D, max_h));
    } catch (...) {
      slot->error = std::current_exception();
    }
  });
  if (slot->error) std::rethrow_exception(slot->error);
  return slot->value;
}

}  // namespace quadrep
