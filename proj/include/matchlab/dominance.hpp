#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matchlab/model.hpp"

namespace matchlab {

// Four-way outcome of a dominance comparison. "Equal" means exactly equal
// distributions; weak dominance with at least one strict coordinate is
// reported as strict, matching the strictness clauses of the dominance
// definitions.
enum class DomRelation {
  LeftStrict,
  Equal,
  RightStrict,
  Incomparable,
};

DomRelation flip(DomRelation r);
// Codes used in cube CSVs: LSTRICT, EQ, RSTRICT, INC.
std::string dom_relation_code(DomRelation r);
std::optional<DomRelation> dom_relation_from_code(const std::string& code);

// First order-stochastic dominance of allocation row v over w relative to
// type t: cumulative probability down t's ranking never falls behind.
DomRelation fosd(std::span<const Rational> v, std::span<const Rational> w, const PrefOrder& t);

// x ordinally dominates y iff every agent's row FOSD-dominates, strict if
// some row is strict; Equal iff the matrices coincide.
DomRelation ordinal_compare(const Allocation& x, const Allocation& y, const TypeProfile& profile);

// d_k = sum_i x_{i, ch(k, t_i)}.
RankDistribution rank_distribution(const Allocation& x, const TypeProfile& profile);

// FOSD on rank distributions via exact cumulative sums.
DomRelation rank_compare(const Allocation& x, const Allocation& y, const TypeProfile& profile);
DomRelation rank_distribution_compare(const RankDistribution& dx, const RankDistribution& dy);

// <v, d>: total rank value of x under valuation v. If x rank dominates y
// this is >= y's value for every valuation.
Rational aggregate_rank_value(const Allocation& x, const TypeProfile& profile,
                              const RankValuation& v);

// One step of an improving trade: agent gives up `from` and takes `to`.
struct TradeStep {
  int agent;
  int from_object;
  int to_object;
};

struct ParetoResult {
  bool efficient = true;
  // Non-empty iff !efficient: either a single move into spare capacity or a
  // cycle of swaps, every participant strictly better off. Re-checkable by
  // applying the steps.
  std::vector<TradeStep> improvement;
};

// A deterministic assignment is ex-post efficient iff no improving move
// into spare capacity and no improving trading cycle exists.
ParetoResult is_pareto_efficient_det(const DetAssignment& a, const Setting& setting,
                                     const TypeProfile& profile);

// First-choice demand structure of a profile.
struct FirstChoiceProfile {
  std::vector<int> k;   // k[j] = number of agents ranking object j first
  int demanded = 0;     // W: objects with k[j] >= 1
  int over_demanded = 0;  // O: objects with k[j] > q_j
  int competing = 0;    // C: agents whose first choice is over-demanded
};

FirstChoiceProfile first_choice_profile(const Setting& setting, const TypeProfile& profile);

// Largest expected number of first choices any allocation can deliver:
// sum_j min(k_j, q_j).
Rational d1_max(const Setting& setting, const TypeProfile& profile);

// d_1(x) == d1_max, exactly.
bool is_first_choice_maximizing(const Allocation& x, const Setting& setting,
                                const TypeProfile& profile);

// Unit-capacity settings only: some agent's first choice is over-demanded
// and its second choice is another agent's first choice. Rules out RSD
// first-choice maximization.
bool has_overlap(const Setting& setting, const TypeProfile& profile);

}  // namespace matchlab
