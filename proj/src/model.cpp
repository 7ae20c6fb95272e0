#include "matchlab/model.hpp"

#include <algorithm>
#include <numeric>

namespace matchlab {

Setting::Setting(int agents, int objects, std::vector<int> caps)
    : n(agents), m(objects), capacities(std::move(caps)) {
  if (n < 1) throw InputError("need at least one agent");
  if (m < 1) throw InputError("need at least one object");
  if (static_cast<int>(capacities.size()) != m)
    throw InputError("capacity vector length must equal the number of objects");
  for (int q : capacities)
    if (q < 1) throw InputError("capacities must be positive");
  if (n > total_capacity())
    throw InputError("supply does not cover demand (n > sum of capacities); add dummy objects");
}

Setting Setting::unit(int agents, int objects) {
  return Setting(agents, objects, std::vector<int>(static_cast<std::size_t>(objects), 1));
}

int Setting::total_capacity() const {
  return std::accumulate(capacities.begin(), capacities.end(), 0);
}

PrefOrder::PrefOrder(std::vector<int> ranking) : ranking_(std::move(ranking)) {
  int m = static_cast<int>(ranking_.size());
  if (m < 1) throw InputError("empty ranking");
  rank_.assign(static_cast<std::size_t>(m), 0);
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (int r = 0; r < m; ++r) {
    int j = ranking_[static_cast<std::size_t>(r)];
    if (j < 0 || j >= m) throw InputError("ranking entry out of range");
    if (seen[static_cast<std::size_t>(j)]) throw InputError("ranking repeats an object");
    seen[static_cast<std::size_t>(j)] = true;
    rank_[static_cast<std::size_t>(j)] = r + 1;
  }
}

int PrefOrder::choice_at(int k) const {
  if (k < 1 || k > m()) throw InputError("rank out of range");
  return ranking_[static_cast<std::size_t>(k - 1)];
}

int PrefOrder::rank_of(int object) const {
  if (object < 0 || object >= m()) throw InputError("object index out of range");
  return rank_[static_cast<std::size_t>(object)];
}

PrefOrder neighbor_swap(const PrefOrder& t, int k) {
  if (k < 1 || k > t.m() - 1) throw InputError("swap rank out of range");
  std::vector<int> ranking = t.ranking();
  std::swap(ranking[static_cast<std::size_t>(k - 1)], ranking[static_cast<std::size_t>(k)]);
  return PrefOrder(std::move(ranking));
}

ContourSets contour_sets(const PrefOrder& t, int object) {
  int k = t.rank_of(object);
  ContourSets cs;
  for (int r = 1; r < k; ++r) cs.upper.push_back(t.choice_at(r));
  for (int r = k + 1; r <= t.m(); ++r) cs.lower.push_back(t.choice_at(r));
  return cs;
}

void validate_profile(const Setting& setting, const TypeProfile& profile) {
  if (profile.n() != setting.n)
    throw InputError("profile has " + std::to_string(profile.n()) + " types, setting has " +
                     std::to_string(setting.n) + " agents");
  for (const PrefOrder& t : profile.types)
    if (t.m() != setting.m) throw InputError("type ranks wrong number of objects");
}

PriorityOrdering::PriorityOrdering(std::vector<int> o) : order(std::move(o)) {
  int n = static_cast<int>(order.size());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int a : order) {
    if (a < 0 || a >= n) throw InputError("priority ordering entry out of range");
    if (seen[static_cast<std::size_t>(a)]) throw InputError("priority ordering repeats an agent");
    seen[static_cast<std::size_t>(a)] = true;
  }
}

PriorityOrdering PriorityOrdering::identity(int n) {
  std::vector<int> o(static_cast<std::size_t>(n));
  std::iota(o.begin(), o.end(), 0);
  return PriorityOrdering(std::move(o));
}

Allocation::Allocation(int n, int m)
    : n_(n), m_(m), probs_(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), Rational(0)) {
  if (n < 1 || m < 1) throw InputError("allocation dimensions must be positive");
}

void validate_allocation(const Allocation& x, const Setting& setting,
                         bool require_factorial_denominator) {
  if (x.n() != setting.n || x.m() != setting.m)
    throw InputError("allocation shape does not match the setting");
  BigInt n_fact = 1;
  for (int i = 2; i <= setting.n; ++i) n_fact *= i;
  for (int i = 0; i < x.n(); ++i) {
    Rational row_sum = 0;
    for (int j = 0; j < x.m(); ++j) {
      const Rational& p = x.at(i, j);
      if (p < 0 || p > 1) throw InputError("allocation entry outside [0,1]");
      if (require_factorial_denominator && n_fact % denominator(p) != 0)
        throw InputError("allocation entry denominator does not divide n!");
      row_sum += p;
    }
    if (row_sum != 1) throw InputError("allocation row does not sum to 1");
  }
  for (int j = 0; j < x.m(); ++j) {
    Rational col_sum = 0;
    for (int i = 0; i < x.n(); ++i) col_sum += x.at(i, j);
    if (col_sum > setting.capacities[static_cast<std::size_t>(j)])
      throw InputError("allocation column exceeds capacity");
  }
}

void validate_det_assignment(const DetAssignment& a, const Setting& setting) {
  if (a.n() != setting.n) throw InputError("assignment length does not match the setting");
  std::vector<int> used(static_cast<std::size_t>(setting.m), 0);
  for (int j : a.assign) {
    if (j < 0 || j >= setting.m) throw InputError("assigned object out of range");
    if (++used[static_cast<std::size_t>(j)] > setting.capacities[static_cast<std::size_t>(j)])
      throw InputError("assignment exceeds an object's capacity");
  }
}

UtilityFn UtilityFn::from_rank_values(const PrefOrder& t, const std::vector<Rational>& by_rank) {
  if (static_cast<int>(by_rank.size()) != t.m())
    throw InputError("rank-value vector length must equal the number of objects");
  for (std::size_t k = 1; k < by_rank.size(); ++k)
    if (!(by_rank[k - 1] > by_rank[k]))
      throw InputError("rank values must be strictly decreasing");
  UtilityFn u;
  u.values.resize(by_rank.size());
  for (int k = 1; k <= t.m(); ++k)
    u.values[static_cast<std::size_t>(t.choice_at(k))] = by_rank[static_cast<std::size_t>(k - 1)];
  return u;
}

bool UtilityFn::consistent_with(const PrefOrder& t) const {
  if (m() != t.m()) return false;
  for (int k = 1; k < t.m(); ++k)
    if (!(values[static_cast<std::size_t>(t.choice_at(k))] >
          values[static_cast<std::size_t>(t.choice_at(k + 1))]))
      return false;
  return true;
}

RankValuation::RankValuation(std::vector<Rational> values) : v(std::move(values)) {
  if (v.empty()) throw InputError("empty rank valuation");
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k - 1] > v[k])) throw InputError("rank valuation must be strictly decreasing");
}

}  // namespace matchlab
