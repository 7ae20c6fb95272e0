#include "matchlab/dominance.hpp"

#include <algorithm>
#include <numeric>

namespace matchlab {

DomRelation flip(DomRelation r) {
  switch (r) {
    case DomRelation::LeftStrict: return DomRelation::RightStrict;
    case DomRelation::RightStrict: return DomRelation::LeftStrict;
    default: return r;
  }
}

std::string dom_relation_code(DomRelation r) {
  switch (r) {
    case DomRelation::LeftStrict: return "LSTRICT";
    case DomRelation::Equal: return "EQ";
    case DomRelation::RightStrict: return "RSTRICT";
    case DomRelation::Incomparable: return "INC";
  }
  return "?";
}

std::optional<DomRelation> dom_relation_from_code(const std::string& code) {
  for (DomRelation r : {DomRelation::LeftStrict, DomRelation::Equal, DomRelation::RightStrict,
                        DomRelation::Incomparable})
    if (dom_relation_code(r) == code) return r;
  return std::nullopt;
}

namespace {

// Classifies two cumulative-sum walks: Equal iff every prefix ties, strict
// iff one side never falls behind and leads at least once.
class PrefixComparer {
 public:
  void step(const Rational& left_cum, const Rational& right_cum) {
    if (left_cum > right_cum) left_ahead_ = true;
    else if (right_cum > left_cum) right_ahead_ = true;
  }
  DomRelation result() const {
    if (left_ahead_ && right_ahead_) return DomRelation::Incomparable;
    if (left_ahead_) return DomRelation::LeftStrict;
    if (right_ahead_) return DomRelation::RightStrict;
    return DomRelation::Equal;
  }

 private:
  bool left_ahead_ = false;
  bool right_ahead_ = false;
};

}  // namespace

DomRelation fosd(std::span<const Rational> v, std::span<const Rational> w, const PrefOrder& t) {
  if (static_cast<int>(v.size()) != t.m() || static_cast<int>(w.size()) != t.m())
    throw InputError("allocation row length does not match the type");
  PrefixComparer cmp;
  Rational cv = 0, cw = 0;
  for (int k = 1; k <= t.m(); ++k) {
    int j = t.choice_at(k);
    cv += v[static_cast<std::size_t>(j)];
    cw += w[static_cast<std::size_t>(j)];
    cmp.step(cv, cw);
  }
  return cmp.result();
}

DomRelation ordinal_compare(const Allocation& x, const Allocation& y, const TypeProfile& profile) {
  if (x.n() != y.n() || x.m() != y.m() || x.n() != profile.n() || x.m() != profile.m())
    throw InputError("allocation shapes do not match");
  bool left_strict = false, right_strict = false;
  for (int i = 0; i < x.n(); ++i) {
    switch (fosd(x.row(i), y.row(i), profile.types[static_cast<std::size_t>(i)])) {
      case DomRelation::Equal: break;
      case DomRelation::LeftStrict: left_strict = true; break;
      case DomRelation::RightStrict: right_strict = true; break;
      case DomRelation::Incomparable: return DomRelation::Incomparable;
    }
    if (left_strict && right_strict) return DomRelation::Incomparable;
  }
  if (left_strict) return DomRelation::LeftStrict;
  if (right_strict) return DomRelation::RightStrict;
  return DomRelation::Equal;
}

RankDistribution rank_distribution(const Allocation& x, const TypeProfile& profile) {
  if (x.n() != profile.n() || x.m() != profile.m())
    throw InputError("allocation shape does not match the profile");
  RankDistribution dist;
  dist.d.assign(static_cast<std::size_t>(x.m()), Rational(0));
  for (int i = 0; i < x.n(); ++i) {
    const PrefOrder& t = profile.types[static_cast<std::size_t>(i)];
    for (int k = 1; k <= x.m(); ++k)
      dist.d[static_cast<std::size_t>(k - 1)] += x.at(i, t.choice_at(k));
  }
  return dist;
}

DomRelation rank_distribution_compare(const RankDistribution& dx, const RankDistribution& dy) {
  if (dx.m() != dy.m()) throw InputError("rank distribution lengths differ");
  PrefixComparer cmp;
  Rational cx = 0, cy = 0;
  for (int k = 0; k < dx.m(); ++k) {
    cx += dx.d[static_cast<std::size_t>(k)];
    cy += dy.d[static_cast<std::size_t>(k)];
    cmp.step(cx, cy);
  }
  return cmp.result();
}

DomRelation rank_compare(const Allocation& x, const Allocation& y, const TypeProfile& profile) {
  return rank_distribution_compare(rank_distribution(x, profile), rank_distribution(y, profile));
}

Rational aggregate_rank_value(const Allocation& x, const TypeProfile& profile,
                              const RankValuation& v) {
  if (static_cast<int>(v.v.size()) != x.m())
    throw InputError("rank valuation length does not match the allocation");
  RankDistribution d = rank_distribution(x, profile);
  Rational total = 0;
  for (int k = 0; k < x.m(); ++k) total += v.v[static_cast<std::size_t>(k)] * d.d[static_cast<std::size_t>(k)];
  return total;
}

ParetoResult is_pareto_efficient_det(const DetAssignment& a, const Setting& setting,
                                     const TypeProfile& profile) {
  validate_det_assignment(a, setting);
  validate_profile(setting, profile);
  int m = setting.m;

  // Improvement graph on objects: edge held->wanted whenever some agent at
  // `held` strictly prefers `wanted`. The assignment is dominated iff an
  // edge enters spare capacity (one agent moves) or a cycle exists (agents
  // rotate along it); otherwise flow conservation rules out any dominating
  // assignment.
  std::vector<int> used(static_cast<std::size_t>(m), 0);
  for (int j : a.assign) ++used[static_cast<std::size_t>(j)];
  std::vector<std::vector<std::pair<int, int>>> edges(static_cast<std::size_t>(m));  // held -> (wanted, agent)
  for (int i = 0; i < setting.n; ++i) {
    const PrefOrder& t = profile.types[static_cast<std::size_t>(i)];
    int held = a.assign[static_cast<std::size_t>(i)];
    for (int k = 1; k < t.rank_of(held); ++k)
      edges[static_cast<std::size_t>(held)].emplace_back(t.choice_at(k), i);
  }

  ParetoResult result;
  for (int j = 0; j < m; ++j)
    for (auto [wanted, agent] : edges[static_cast<std::size_t>(j)])
      if (used[static_cast<std::size_t>(wanted)] < setting.capacities[static_cast<std::size_t>(wanted)]) {
        result.efficient = false;
        result.improvement = {{agent, j, wanted}};
        return result;
      }

  // Cycle detection by iterative DFS with colors.
  std::vector<int> color(static_cast<std::size_t>(m), 0);  // 0 white, 1 gray, 2 black
  std::vector<int> parent_obj(static_cast<std::size_t>(m), -1);
  std::vector<int> parent_agent(static_cast<std::size_t>(m), -1);
  for (int start = 0; start < m; ++start) {
    if (color[static_cast<std::size_t>(start)] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
    color[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
      auto& [node, next_edge] = stack.back();
      if (next_edge < edges[static_cast<std::size_t>(node)].size()) {
        auto [wanted, agent] = edges[static_cast<std::size_t>(node)][next_edge++];
        if (color[static_cast<std::size_t>(wanted)] == 0) {
          color[static_cast<std::size_t>(wanted)] = 1;
          parent_obj[static_cast<std::size_t>(wanted)] = node;
          parent_agent[static_cast<std::size_t>(wanted)] = agent;
          stack.emplace_back(wanted, 0);
        } else if (color[static_cast<std::size_t>(wanted)] == 1) {
          // Back edge: walk parents from `node` back to `wanted`.
          result.efficient = false;
          std::vector<TradeStep> cycle{{agent, node, wanted}};
          int cur = node;
          while (cur != wanted) {
            cycle.push_back({parent_agent[static_cast<std::size_t>(cur)],
                             parent_obj[static_cast<std::size_t>(cur)], cur});
            cur = parent_obj[static_cast<std::size_t>(cur)];
          }
          std::reverse(cycle.begin(), cycle.end());
          result.improvement = std::move(cycle);
          return result;
        }
      } else {
        color[static_cast<std::size_t>(node)] = 2;
        stack.pop_back();
      }
    }
  }
  return result;
}

FirstChoiceProfile first_choice_profile(const Setting& setting, const TypeProfile& profile) {
  validate_profile(setting, profile);
  FirstChoiceProfile fcp;
  fcp.k.assign(static_cast<std::size_t>(setting.m), 0);
  for (const PrefOrder& t : profile.types) ++fcp.k[static_cast<std::size_t>(t.choice_at(1))];
  for (int j = 0; j < setting.m; ++j) {
    int kj = fcp.k[static_cast<std::size_t>(j)];
    if (kj >= 1) ++fcp.demanded;
    if (kj > setting.capacities[static_cast<std::size_t>(j)]) {
      ++fcp.over_demanded;
      fcp.competing += kj;
    }
  }
  return fcp;
}

Rational d1_max(const Setting& setting, const TypeProfile& profile) {
  FirstChoiceProfile fcp = first_choice_profile(setting, profile);
  int total = 0;
  for (int j = 0; j < setting.m; ++j)
    total += std::min(fcp.k[static_cast<std::size_t>(j)], setting.capacities[static_cast<std::size_t>(j)]);
  return Rational(total);
}

bool is_first_choice_maximizing(const Allocation& x, const Setting& setting,
                                const TypeProfile& profile) {
  validate_allocation(x, setting);
  RankDistribution d = rank_distribution(x, profile);
  return d.d.front() == d1_max(setting, profile);
}

bool has_overlap(const Setting& setting, const TypeProfile& profile) {
  for (int q : setting.capacities)
    if (q != 1) throw InputError("overlap is defined for unit-capacity settings");
  if (setting.m < 2) return false;
  FirstChoiceProfile fcp = first_choice_profile(setting, profile);
  for (const PrefOrder& t : profile.types) {
    int first = t.choice_at(1);
    int second = t.choice_at(2);
    if (fcp.k[static_cast<std::size_t>(first)] >= 2 && fcp.k[static_cast<std::size_t>(second)] >= 1)
      return true;
  }
  return false;
}

}  // namespace matchlab
