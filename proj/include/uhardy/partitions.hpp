#pragma once

// Young diagrams, canonical basis keys (partition + distinct index tuple), and
// the three exact weight families attached to every key:
//   fock_weight   lambda!/n!                       (symmetric tensor norm^2)
//   hardy_weight  (l-1)! lambda! / (l-1+n)!        (boundary model norm^2)
//   jstar_ratio    C(l-1+n, n) = fock/hardy          (exact rational)
// All three are exact rationals; capacity bounds are hard errors.

#include <algorithm>
#include <compare>
#include <utility>
#include <vector>

#include "uhardy/common.hpp"

namespace uhardy {

class Partition {
 public:
  Partition() = default;  // the empty partition of 0
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] <= 0)
        throw std::invalid_argument("Partition: parts must be positive");
      if (i > 0 && parts_[i] > parts_[i - 1])
        throw std::invalid_argument("Partition: parts must be nonincreasing");
    }
  }
  Partition(std::initializer_list<int> parts)
      : Partition(std::vector<int>(parts)) {}

  int weight() const {  // |lambda|
    int s = 0;
    for (int p : parts_) s += p;
    return s;
  }
  int length() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }
  const std::vector<int>& parts() const { return parts_; }

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> parts_;  // nonincreasing, all >= 1
};

// Canonical form: indices strictly increasing with exponents aligned, so equal
// (index -> exponent) mappings compare equal structurally. The partition is
// the exponent multiset sorted nonincreasing.
class BasisKey {
 public:
  BasisKey() = default;  // empty key: lambda = (), iota = ()

  static BasisKey from_pairs(std::vector<std::pair<int, int>> index_exponent) {
    std::sort(index_exponent.begin(), index_exponent.end());
    BasisKey k;
    for (auto& [idx, expo] : index_exponent) {
      if (idx <= 0) throw std::invalid_argument("BasisKey: indices must be positive");
      if (expo <= 0) throw std::invalid_argument("BasisKey: exponents must be positive");
      if (!k.indices_.empty() && k.indices_.back() == idx)
        throw std::invalid_argument("BasisKey: duplicate index");
      k.indices_.push_back(idx);
      k.exponents_.push_back(expo);
    }
    return k;
  }

  // Partition-first construction: lambda nonincreasing, iota distinct, aligned.
  static BasisKey from_partition(const Partition& lambda, const std::vector<int>& iota) {
    if (static_cast<int>(iota.size()) != lambda.length())
      throw std::invalid_argument("BasisKey: index count must equal partition length");
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(iota.size());
    for (std::size_t i = 0; i < iota.size(); ++i)
      pairs.emplace_back(iota[i], lambda.parts()[i]);
    return from_pairs(std::move(pairs));
  }

  int degree() const {  // |lambda|
    int s = 0;
    for (int e : exponents_) s += e;
    return s;
  }
  int length() const { return static_cast<int>(indices_.size()); }
  int max_index() const { return indices_.empty() ? 0 : indices_.back(); }
  const std::vector<int>& indices() const { return indices_; }
  const std::vector<int>& exponents() const { return exponents_; }

  Partition partition() const {
    std::vector<int> parts = exponents_;
    std::sort(parts.begin(), parts.end(), std::greater<int>());
    return Partition(std::move(parts));
  }

  auto operator<=>(const BasisKey&) const = default;

 private:
  std::vector<int> indices_;    // strictly increasing, >= 1
  std::vector<int> exponents_;  // aligned with indices_, all >= 1
};

inline BasisKey canonicalize_key(std::vector<std::pair<int, int>> pairs) {
  return BasisKey::from_pairs(std::move(pairs));
}

// All partitions of n, reverse-lexicographic: (n) first, (1,...,1) last.
inline std::vector<Partition> enumerate_partitions(int n) {
  if (n < 0) throw std::invalid_argument("enumerate_partitions: negative n");
  if (n > 60) throw capacity_error("enumerate_partitions: n > 60");
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rest, int maxpart) -> void {
    if (rest == 0) {
      out.push_back(Partition(cur));
      return;
    }
    for (int k = std::min(rest, maxpart); k >= 1; --k) {
      cur.push_back(k);
      self(self, rest - k, k);
      cur.pop_back();
    }
  };
  rec(rec, n, n == 0 ? 1 : n);
  return out;
}

// All canonical keys with |lambda| = n and indices in {1..d}; one key per
// monomial of degree n in d variables, so the count is C(n+d-1, n).
inline std::vector<BasisKey> enumerate_basis_keys(int n, int d) {
  if (n < 0 || d <= 0) throw std::invalid_argument("enumerate_basis_keys: bad arguments");
  if (n > 20) throw capacity_error("enumerate_basis_keys: n > 20");
  if (d > 32) throw capacity_error("enumerate_basis_keys: d > 32");
  std::vector<BasisKey> out;
  std::vector<std::pair<int, int>> cur;  // (index, exponent), indices ascending
  auto rec = [&](auto&& self, int next_index, int rest) -> void {
    if (rest == 0) {
      out.push_back(BasisKey::from_pairs(cur));
      return;
    }
    if (next_index > d) return;
    // exponent for next_index: high to low, then skip the index entirely
    for (int e = rest; e >= 1; --e) {
      cur.emplace_back(next_index, e);
      self(self, next_index + 1, rest - e);
      cur.pop_back();
    }
    self(self, next_index + 1, rest);
  };
  rec(rec, 1, n);
  return out;
}

inline BigInt partition_factorial(const Partition& lambda) {
  if (lambda.weight() > 60) throw capacity_error("partition_factorial: |lambda| > 60");
  BigInt r = 1;
  for (int p : lambda.parts()) r *= factorial(p);
  return r;
}

inline Rational fock_weight(const Partition& lambda) {
  const int n = lambda.weight();
  if (n > 60) throw capacity_error("fock_weight: |lambda| > 60");
  return Rational(partition_factorial(lambda), factorial(n));
}

inline Rational hardy_weight(const Partition& lambda) {
  if (lambda.empty()) return 1;  // epsilon^{empty} == 1
  const int n = lambda.weight();
  const int l = lambda.length();
  if (n + l > 60) throw capacity_error("hardy_weight: |lambda| + l(lambda) > 60");
  return Rational(factorial(l - 1) * partition_factorial(lambda), factorial(l - 1 + n));
}

// C(l(lambda)-1+|lambda|, |lambda|); equals fock_weight/hardy_weight.
inline Rational jstar_ratio(const Partition& lambda) {
  if (lambda.empty()) return 1;
  const int n = lambda.weight();
  const int l = lambda.length();
  if (n + l > 60) throw capacity_error("jstar_ratio: |lambda| + l(lambda) > 60");
  return Rational(binomial(l - 1 + n, n));
}

}  // namespace uhardy
