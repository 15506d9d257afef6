#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "quadrep/arith.hpp"
#include "quadrep/forms.hpp"

namespace quadrep {

inline constexpr std::int64_t kDefaultMaxClassNumber = 1'000'000;

/// Element of G = Z/m_1 + ... + Z/m_t, coords[k] in [0, m_k).
struct GroupVector {
  std::vector<std::int64_t> coords;

  friend bool operator==(const GroupVector&, const GroupVector&) = default;
};

/// All primitive reduced forms of discriminant D, sorted lexicographically.
std::vector<FormClass> enumerate_reduced_forms(const Int& D);

class ClassGroupStructure {
 public:
  const Int& D() const { return D_; }
  std::int64_t h() const { return static_cast<std::int64_t>(classes_.size()); }
  const std::vector<FormClass>& generators() const { return gens_; }
  const std::vector<std::int64_t>& orders() const { return orders_; }
  const std::vector<FormClass>& classes() const { return classes_; }

  /// Throws Error(UnknownClass) for a class of another discriminant or a
  /// non-reduced representative.
  GroupVector dlog(const FormClass& c) const;

  GroupVector add(const GroupVector& x, const GroupVector& y) const;
  GroupVector sub(const GroupVector& x, const GroupVector& y) const;
  GroupVector negate(const GroupVector& x) const;
  GroupVector zero() const { return GroupVector{std::vector<std::int64_t>(orders_.size(), 0)}; }

  // Mixed-radix index in [0, h), used as a dense key.
  std::int64_t index_of(const GroupVector& x) const;
  GroupVector vector_at(std::int64_t index) const;

  // prod gens[k]^coords[k]
  FormClass evaluate(const GroupVector& x) const;

 private:
  friend ClassGroupStructure compute_structure(const Int& D, std::int64_t max_h);

  Int D_;
  std::vector<FormClass> classes_;
  std::vector<FormClass> gens_;
  std::vector<std::int64_t> orders_;
  std::unordered_map<FormClass, std::int64_t> dlog_index_;
};

/// Throws InvalidDiscriminant, or DeskScaleExceeded when h > max_h.
ClassGroupStructure compute_structure(const Int& D, std::int64_t max_h = kDefaultMaxClassNumber);

GroupVector class_dlog(const ClassGroupStructure& G, const FormClass& c);

/// Process-wide cache keyed by (D, max_h). Thread-safe; each key is built once.
std::shared_ptr<const ClassGroupStructure> cached_structure(const Int& D,
                                                            std::int64_t max_h = kDefaultMaxClassNumber);

}  // namespace quadrep
