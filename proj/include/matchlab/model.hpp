#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matchlab/errors.hpp"
#include "matchlab/rational.hpp"

namespace matchlab {

// Market shape: n agents, m objects, q_j copies of object j. Supply must
// cover demand (n <= sum q_j); callers add dummy objects themselves if they
// want the n == sum q convention.
struct Setting {
  int n = 0;
  int m = 0;
  std::vector<int> capacities;

  Setting() = default;
  Setting(int agents, int objects, std::vector<int> caps);

  static Setting unit(int agents, int objects);  // q_j = 1 for all j

  int total_capacity() const;
};

// Strict ranking over all m objects, most-preferred first. Immutable after
// construction; rank lookups are O(1).
class PrefOrder {
 public:
  explicit PrefOrder(std::vector<int> ranking);

  int m() const { return static_cast<int>(ranking_.size()); }

  // k is 1-based: choice_at(1) is the top choice. rank_of and choice_at are
  // mutually inverse.
  int choice_at(int k) const;
  int rank_of(int object) const;

  const std::vector<int>& ranking() const { return ranking_; }
  // rank_table()[j] == rank_of(j); handy for hot loops.
  const std::vector<int>& rank_table() const { return rank_; }

  bool operator==(const PrefOrder& other) const { return ranking_ == other.ranking_; }

 private:
  std::vector<int> ranking_;
  std::vector<int> rank_;  // object -> 1-based rank
};

// Swap the objects at ranks k and k+1 (1 <= k <= m-1). Involution; the
// result is in the neighborhood of t.
PrefOrder neighbor_swap(const PrefOrder& t, int k);

struct ContourSets {
  std::vector<int> upper;  // objects strictly preferred to j
  std::vector<int> lower;  // objects strictly worse than j
};

// upper/lower contour sets of object j under t; upper + {j} + lower
// partitions the object set.
ContourSets contour_sets(const PrefOrder& t, int object);

struct TypeProfile {
  std::vector<PrefOrder> types;

  int n() const { return static_cast<int>(types.size()); }
  int m() const { return types.empty() ? 0 : types.front().m(); }
};

// Throws InputError unless the profile has setting.n types, each a valid
// ranking of setting.m objects.
void validate_profile(const Setting& setting, const TypeProfile& profile);

// Permutation of agents, highest priority first: order[0] picks first.
struct PriorityOrdering {
  std::vector<int> order;

  explicit PriorityOrdering(std::vector<int> o);
  static PriorityOrdering identity(int n);

  int n() const { return static_cast<int>(order.size()); }
};

// n x m matrix of exact assignment probabilities, row-major.
class Allocation {
 public:
  Allocation(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }

  Rational& at(int agent, int object) { return probs_[static_cast<std::size_t>(agent) * m_ + object]; }
  const Rational& at(int agent, int object) const {
    return probs_[static_cast<std::size_t>(agent) * m_ + object];
  }

  std::span<const Rational> row(int agent) const {
    return {probs_.data() + static_cast<std::size_t>(agent) * m_, static_cast<std::size_t>(m_)};
  }

  bool operator==(const Allocation& other) const {
    return n_ == other.n_ && m_ == other.m_ && probs_ == other.probs_;
  }

 private:
  int n_;
  int m_;
  std::vector<Rational> probs_;
};

// Postcondition check usable on every mechanism output: rows sum to exactly
// 1, column sums respect capacities, entries in [0,1]. When
// require_factorial_denominator is set, also checks every denominator
// divides n! (full-enumeration outputs).
void validate_allocation(const Allocation& x, const Setting& setting,
                         bool require_factorial_denominator = false);

// One object index per agent; object j assigned to at most q_j agents.
struct DetAssignment {
  std::vector<int> assign;

  int n() const { return static_cast<int>(assign.size()); }
};

void validate_det_assignment(const DetAssignment& a, const Setting& setting);

// Cardinal utilities indexed by object.
struct UtilityFn {
  std::vector<Rational> values;

  int m() const { return static_cast<int>(values.size()); }

  // Utility u with u(choice_at(t,k)) = by_rank[k-1]; by_rank must be
  // strictly decreasing so that u is consistent with t.
  static UtilityFn from_rank_values(const PrefOrder& t, const std::vector<Rational>& by_rank);

  // True when the values strictly decrease along t's ranking.
  bool consistent_with(const PrefOrder& t) const;
};

// d_k = expected number of k-th choices allocated, k = 1..m.
struct RankDistribution {
  std::vector<Rational> d;

  int m() const { return static_cast<int>(d.size()); }
};

// Strictly decreasing value of allocating a 1st, 2nd, ... choice.
struct RankValuation {
  std::vector<Rational> v;

  explicit RankValuation(std::vector<Rational> values);
};

}  // namespace matchlab
