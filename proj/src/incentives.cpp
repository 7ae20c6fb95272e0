#include "matchlab/incentives.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <memory>
#include <numeric>
#include <unordered_map>

#include "kernel.hpp"
#include "matchlab/dominance.hpp"
#include "matchlab/rng.hpp"
#include "matchlab/simulate.hpp"

namespace matchlab {

using detail::DetRunner;
using detail::PermSpace;
using detail::ProfileEnum;

Rational expected_utility(const UtilityFn& u, std::span<const Rational> row) {
  if (static_cast<int>(row.size()) != u.m())
    throw InputError("utility and allocation row lengths differ");
  Rational total = 0;
  for (int j = 0; j < u.m(); ++j) total += u.values[static_cast<std::size_t>(j)] * row[static_cast<std::size_t>(j)];
  return total;
}

namespace {

Mechanism base_of(Mechanism mech) {
  switch (mech) {
    case Mechanism::RSD: return Mechanism::SD;
    case Mechanism::NBM:
    case Mechanism::NBM_PLUS: return Mechanism::NBM;
    case Mechanism::ABM:
    case Mechanism::ABM_PLUS: return Mechanism::ABM;
    default: throw InputError("mechanism " + mechanism_name(mech) + " is not ordering-randomized");
  }
}

bool is_plus(Mechanism mech) { return mech == Mechanism::NBM_PLUS || mech == Mechanism::ABM_PLUS; }

// Evaluates one agent's exact allocation row while one report varies and
// everyone else stays fixed. Counts are over all n! orderings.
class MisreportScanner {
 public:
  MisreportScanner(Mechanism mech, const Setting& setting, const TypeProfile& profile,
                   std::int64_t misreport_cap, int enumeration_cap)
      : mech_(mech),
        setting_(setting),
        profile_(profile),
        perms_(setting.m),
        runner_(setting),
        enumeration_cap_(enumeration_cap) {
    validate_profile(setting, profile);
    if (setting.n > enumeration_cap)
      throw BudgetError("misreport analysis needs exact allocations; " + std::to_string(setting.n) +
                        " agents exceed the enumeration cap of " + std::to_string(enumeration_cap));
    if (perms_.count() > misreport_cap)
      throw BudgetError("misreport search over " + std::to_string(perms_.count()) +
                        " reports exceeds the cap of " + std::to_string(misreport_cap));
    row_.resize(static_cast<std::size_t>(setting.m));
    out_.resize(static_cast<std::size_t>(setting.n));
  }

  const PermSpace& perms() const { return perms_; }
  std::int64_t den() const { return detail::factorial(setting_.n); }

  // Allocation row of `agent` when it reports perm `report_idx`; plus
  // variants fall back to the full allocation so the PS patch applies.
  std::vector<Rational> agent_row(int agent, int report_idx) {
    if (is_plus(mech_)) {
      TypeProfile reported = profile_;
      reported.types[static_cast<std::size_t>(agent)] = perms_.pref_order(report_idx);
      Allocation x =
          plus_variant(base_of(mech_), setting_, reported, enumeration_cap_);
      std::vector<Rational> row(static_cast<std::size_t>(setting_.m));
      for (int j = 0; j < setting_.m; ++j) row[static_cast<std::size_t>(j)] = x.at(agent, j);
      return row;
    }
    runner_.set_profile(profile_);
    runner_.set_agent(agent, perms_.choice(report_idx), perms_.rank(report_idx));
    std::fill(row_.begin(), row_.end(), 0);
    Mechanism base = base_of(mech_);
    detail::for_each_ordering(setting_.n, [&](const int* pi) {
      switch (base) {
        case Mechanism::SD: runner_.run_sd(pi, out_.data()); break;
        case Mechanism::NBM: runner_.run_nbm(pi, out_.data()); break;
        case Mechanism::ABM: runner_.run_abm(pi, out_.data()); break;
        default: break;
      }
      ++row_[static_cast<std::size_t>(out_[static_cast<std::size_t>(agent)])];
    });
    std::vector<Rational> row(static_cast<std::size_t>(setting_.m));
    for (int j = 0; j < setting_.m; ++j)
      row[static_cast<std::size_t>(j)] = Rational(row_[static_cast<std::size_t>(j)], den());
    return row;
  }

 private:
  Mechanism mech_;
  const Setting& setting_;
  TypeProfile profile_;
  PermSpace perms_;
  DetRunner runner_;
  int enumeration_cap_;
  std::vector<std::int64_t> row_;
  std::vector<int> out_;
};

}  // namespace

std::optional<Manipulation> is_manipulable_at(Mechanism mech, const Setting& setting,
                                              const TypeProfile& profile, int agent,
                                              const UtilityFn& u, std::int64_t misreport_cap,
                                              int enumeration_cap) {
  if (agent < 0 || agent >= setting.n) throw InputError("agent index out of range");
  if (!u.consistent_with(profile.types[static_cast<std::size_t>(agent)]))
    throw InputError("utility function is not consistent with the agent's type");
  MisreportScanner scanner(mech, setting, profile, misreport_cap, enumeration_cap);
  int truth_idx = scanner.perms().index_of(profile.types[static_cast<std::size_t>(agent)]);
  Rational truthful = expected_utility(u, scanner.agent_row(agent, truth_idx));

  std::optional<Manipulation> best;
  for (int p = 0; p < scanner.perms().count(); ++p) {
    if (p == truth_idx) continue;
    Rational gain = expected_utility(u, scanner.agent_row(agent, p)) - truthful;
    if (gain > 0 && (!best || gain > best->gain))
      best = Manipulation{scanner.perms().pref_order(p), gain};
  }
  return best;
}

std::optional<PrefOrder> find_fosd_manipulation(Mechanism mech, const Setting& setting,
                                                const TypeProfile& profile, int agent,
                                                std::int64_t misreport_cap, int enumeration_cap) {
  if (agent < 0 || agent >= setting.n) throw InputError("agent index out of range");
  MisreportScanner scanner(mech, setting, profile, misreport_cap, enumeration_cap);
  const PrefOrder& truth = profile.types[static_cast<std::size_t>(agent)];
  int truth_idx = scanner.perms().index_of(truth);
  std::vector<Rational> truth_row = scanner.agent_row(agent, truth_idx);

  for (int p = 0; p < scanner.perms().count(); ++p) {
    if (p == truth_idx) continue;
    std::vector<Rational> row = scanner.agent_row(agent, p);
    if (fosd(row, truth_row, truth) == DomRelation::LeftStrict)
      return scanner.perms().pref_order(p);
  }
  return std::nullopt;
}

std::vector<MisreportGain> misreport_gains(Mechanism mech, const Setting& setting,
                                           const TypeProfile& profile,
                                           const std::vector<UtilityFn>& utilities,
                                           std::optional<int> only_agent,
                                           std::int64_t misreport_cap, int enumeration_cap) {
  if (static_cast<int>(utilities.size()) != setting.n)
    throw InputError("need one utility function per agent");
  for (int i = 0; i < setting.n; ++i)
    if (!utilities[static_cast<std::size_t>(i)].consistent_with(profile.types[static_cast<std::size_t>(i)]))
      throw InputError("utility function " + std::to_string(i) + " is not consistent with its type");
  if (only_agent && (*only_agent < 0 || *only_agent >= setting.n))
    throw InputError("agent index out of range");

  MisreportScanner scanner(mech, setting, profile, misreport_cap, enumeration_cap);
  std::vector<MisreportGain> gains;
  for (int agent = 0; agent < setting.n; ++agent) {
    if (only_agent && agent != *only_agent) continue;
    int truth_idx = scanner.perms().index_of(profile.types[static_cast<std::size_t>(agent)]);
    Rational truthful =
        expected_utility(utilities[static_cast<std::size_t>(agent)], scanner.agent_row(agent, truth_idx));
    for (int p = 0; p < scanner.perms().count(); ++p) {
      if (p == truth_idx) continue;
      Rational value =
          expected_utility(utilities[static_cast<std::size_t>(agent)], scanner.agent_row(agent, p));
      gains.push_back({agent, scanner.perms().pref_order(p), value - truthful});
    }
  }
  return gains;
}

// --- Axioms ---------------------------------------------------------------

std::string axiom_name(Axiom a) {
  switch (a) {
    case Axiom::SwapMonotonic: return "swap_monotonic";
    case Axiom::UpperInvariant: return "upper_invariant";
    case Axiom::LowerInvariant: return "lower_invariant";
  }
  return "?";
}

std::optional<Axiom> axiom_from_name(const std::string& name) {
  for (Axiom a : {Axiom::SwapMonotonic, Axiom::UpperInvariant, Axiom::LowerInvariant})
    if (axiom_name(a) == name) return a;
  return std::nullopt;
}

namespace {

// The swap turns t (with a_k just above a_{k+1}) into t'. `before`/`after`
// are the reporting agent's rows under t and t'.
template <typename Value>
bool axiom_violated_rows(Axiom axiom, const std::uint8_t* truth_choice, int m, int k,
                         const Value* before, const Value* after) {
  int upper = truth_choice[k - 1];   // a_k
  int lower = truth_choice[k];       // a_{k+1}
  switch (axiom) {
    case Axiom::UpperInvariant:
      for (int r = 0; r < k - 1; ++r)
        if (before[truth_choice[r]] != after[truth_choice[r]]) return true;
      return false;
    case Axiom::LowerInvariant:
      for (int r = k + 1; r < m; ++r)
        if (before[truth_choice[r]] != after[truth_choice[r]]) return true;
      return false;
    case Axiom::SwapMonotonic: {
      bool unchanged = true;
      for (int j = 0; j < m && unchanged; ++j) unchanged = before[j] == after[j];
      if (unchanged) return false;
      return !(before[upper] > after[upper] && before[lower] < after[lower]);
    }
  }
  return false;
}

// Exhaustive per-profile allocation table: counts over all n! orderings for
// every profile of the setting, with a common denominator. Plus variants
// overwrite separable-wants rows with the (rescaled) PS allocation.
struct AllocTable {
  std::unique_ptr<PermSpace> perms;
  std::unique_ptr<ProfileEnum> profiles;
  int n = 0;
  int m = 0;
  std::int64_t den = 1;
  std::vector<std::uint32_t> counts;

  const std::uint32_t* row(std::int64_t profile, int agent) const {
    return counts.data() + (static_cast<std::size_t>(profile) * n + agent) * m;
  }
};

AllocTable build_table(Mechanism mech, const Setting& setting, const CheckOptions& opts) {
  Mechanism base = base_of(mech);
  if (setting.n > opts.enumeration_cap)
    throw BudgetError("exhaustive check needs exact allocations; " + std::to_string(setting.n) +
                      " agents exceed the enumeration cap of " +
                      std::to_string(opts.enumeration_cap));
  AllocTable table;
  table.perms = std::make_unique<PermSpace>(setting.m);
  table.profiles = std::make_unique<ProfileEnum>(*table.perms, setting.n, opts.profile_budget);
  table.n = setting.n;
  table.m = setting.m;
  table.den = detail::factorial(setting.n);
  table.counts.assign(static_cast<std::size_t>(table.profiles->count()) * setting.n * setting.m, 0);

  detail::parallel_chunks(table.profiles->count(), opts.threads, [&](int, std::int64_t begin, std::int64_t end) {
    DetRunner runner(setting);
    std::vector<int> digits(static_cast<std::size_t>(setting.n));
    std::vector<int> out(static_cast<std::size_t>(setting.n));
    for (std::int64_t p = begin; p < end; ++p) {
      table.profiles->decode(p, digits.data());
      runner.set_profile(*table.perms, digits.data());
      std::uint32_t* rows = table.counts.data() + static_cast<std::size_t>(p) * setting.n * setting.m;
      detail::for_each_ordering(setting.n, [&](const int* pi) {
        switch (base) {
          case Mechanism::SD: runner.run_sd(pi, out.data()); break;
          case Mechanism::NBM: runner.run_nbm(pi, out.data()); break;
          case Mechanism::ABM: runner.run_abm(pi, out.data()); break;
          default: break;
        }
        for (int i = 0; i < setting.n; ++i)
          ++rows[i * setting.m + out[static_cast<std::size_t>(i)]];
      });
    }
  });

  if (is_plus(mech)) {
    // Locate separable-wants profiles and overwrite their rows with PS.
    std::vector<std::pair<std::int64_t, Allocation>> patches;
    for (std::int64_t p = 0; p < table.profiles->count(); ++p) {
      TypeProfile profile = table.profiles->profile_at(p);
      if (separable_wants(setting, profile))
        patches.emplace_back(p, plus_variant(base, setting, profile, opts.enumeration_cap));
    }
    BigInt common = table.den;
    for (const auto& [p, x] : patches)
      for (int i = 0; i < table.n; ++i)
        for (int j = 0; j < table.m; ++j)
          common = boost::multiprecision::lcm(common, BigInt(denominator(x.at(i, j))));
    if (common > std::numeric_limits<std::uint32_t>::max())
      throw BudgetError("plus-variant common denominator too large for the table");
    std::int64_t new_den = common.convert_to<std::int64_t>();
    if (new_den != table.den) {
      std::uint32_t scale = static_cast<std::uint32_t>(new_den / table.den);
      for (std::uint32_t& c : table.counts) c *= scale;
      table.den = new_den;
    }
    for (const auto& [p, x] : patches) {
      std::uint32_t* rows = table.counts.data() + static_cast<std::size_t>(p) * table.n * table.m;
      for (int i = 0; i < table.n; ++i)
        for (int j = 0; j < table.m; ++j) {
          Rational scaled = x.at(i, j) * table.den;
          rows[i * table.m + j] = numerator(scaled).convert_to<std::uint32_t>();
        }
    }
  }
  return table;
}

std::vector<Rational> rationalize(const std::uint32_t* row, int m, std::int64_t den) {
  std::vector<Rational> out(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] = Rational(row[j], den);
  return out;
}

AxiomReport check_axiom_exhaustive(Mechanism mech, const Setting& setting, Axiom axiom,
                                   const CheckOptions& opts) {
  AllocTable table = build_table(mech, setting, opts);
  AxiomReport report{axiom, mech, true, true, table.profiles->count(), std::nullopt};

  std::vector<int> digits(static_cast<std::size_t>(setting.n));
  for (std::int64_t p = 0; p < table.profiles->count(); ++p) {
    table.profiles->decode(p, digits.data());
    for (int i = 0; i < setting.n; ++i) {
      int truth = digits[static_cast<std::size_t>(i)];
      const std::uint32_t* before = table.row(p, i);
      for (int k = 1; k <= setting.m - 1; ++k) {
        std::int64_t swapped =
            p + (table.perms->neighbor(truth, k) - truth) * table.profiles->stride(i);
        const std::uint32_t* after = table.row(swapped, i);
        if (axiom_violated_rows(axiom, table.perms->choice(truth), setting.m, k, before, after)) {
          report.passed = false;
          report.counterexample = AxiomCounterexample{
              table.profiles->profile_at(p), i, k, rationalize(before, setting.m, table.den),
              rationalize(after, setting.m, table.den)};
          return report;
        }
      }
    }
  }
  return report;
}

AxiomReport check_axiom_sampled(Mechanism mech, const Setting& setting, Axiom axiom,
                                const CheckOptions& opts) {
  AxiomReport report{axiom, mech, true, false, opts.samples, std::nullopt};
  for (std::int64_t s = 0; s < opts.samples; ++s) {
    TypeProfile profile = sample_profile(setting, opts.seed, static_cast<std::uint64_t>(s));
    MisreportScanner scanner(mech, setting, profile, std::numeric_limits<std::int64_t>::max(),
                             opts.enumeration_cap);
    for (int i = 0; i < setting.n; ++i) {
      const PrefOrder& truth = profile.types[static_cast<std::size_t>(i)];
      int truth_idx = scanner.perms().index_of(truth);
      std::vector<Rational> before = scanner.agent_row(i, truth_idx);
      std::vector<std::uint8_t> choice(static_cast<std::size_t>(setting.m));
      for (int r = 0; r < setting.m; ++r)
        choice[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(truth.ranking()[static_cast<std::size_t>(r)]);
      for (int k = 1; k <= setting.m - 1; ++k) {
        int swapped_idx = scanner.perms().index_of(neighbor_swap(truth, k));
        std::vector<Rational> after = scanner.agent_row(i, swapped_idx);
        if (axiom_violated_rows(axiom, choice.data(), setting.m, k, before.data(), after.data())) {
          report.passed = false;
          report.counterexample = AxiomCounterexample{profile, i, k, before, after};
          return report;
        }
      }
    }
  }
  return report;
}

}  // namespace

AxiomReport check_axiom(Mechanism mech, const Setting& setting, Axiom axiom,
                        const CheckOptions& opts) {
  base_of(mech);  // validates the mechanism family
  auto space = ProfileEnum::space_size(static_cast<int>(detail::factorial(setting.m)), setting.n,
                                       opts.profile_budget);
  if (space && setting.n <= opts.enumeration_cap)
    return check_axiom_exhaustive(mech, setting, axiom, opts);
  return check_axiom_sampled(mech, setting, axiom, opts);
}

bool recheck_axiom_violation(Mechanism mech, const Setting& setting, Axiom axiom,
                             const AxiomCounterexample& ce, int enumeration_cap) {
  validate_profile(setting, ce.profile);
  const PrefOrder& truth = ce.profile.types[static_cast<std::size_t>(ce.agent)];
  TypeProfile swapped_profile = ce.profile;
  swapped_profile.types[static_cast<std::size_t>(ce.agent)] = neighbor_swap(truth, ce.swap_rank);

  auto agent_row = [&](const TypeProfile& prof) {
    Allocation x = is_plus(mech) ? plus_variant(base_of(mech), setting, prof, enumeration_cap)
                                 : exact_allocation(mech, setting, prof, enumeration_cap);
    std::vector<Rational> row(static_cast<std::size_t>(setting.m));
    for (int j = 0; j < setting.m; ++j) row[static_cast<std::size_t>(j)] = x.at(ce.agent, j);
    return row;
  };
  std::vector<Rational> before = agent_row(ce.profile);
  std::vector<Rational> after = agent_row(swapped_profile);
  std::vector<std::uint8_t> choice(static_cast<std::size_t>(setting.m));
  for (int r = 0; r < setting.m; ++r)
    choice[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(truth.ranking()[static_cast<std::size_t>(r)]);
  return axiom_violated_rows(axiom, choice.data(), setting.m, ce.swap_rank, before.data(),
                             after.data());
}

// --- URBI(r), extreme utilities, r-PSP, DOSP --------------------------------

bool urbi_member(const UtilityFn& u, const Rational& r) {
  if (r < 0 || r > 1) throw InputError("URBI bound must lie in [0,1]");
  Rational min_u = *std::min_element(u.values.begin(), u.values.end());
  for (int a = 0; a < u.m(); ++a)
    for (int b = 0; b < u.m(); ++b) {
      if (u.values[static_cast<std::size_t>(a)] <= u.values[static_cast<std::size_t>(b)]) continue;
      if (r * (u.values[static_cast<std::size_t>(a)] - min_u) <
          u.values[static_cast<std::size_t>(b)] - min_u)
        return false;
    }
  return true;
}

std::vector<UtilityFn> extreme_utilities(const PrefOrder& t, const Rational& r) {
  if (r <= 0 || r > 1) throw InputError("URBI bound must lie in (0,1] for the extreme-point form");
  int m = t.m();
  std::vector<UtilityFn> extremes;
  Rational power = 1;
  std::vector<Rational> by_rank(static_cast<std::size_t>(m), Rational(0));
  for (int k = 1; k <= m - 1; ++k) {
    // u^(k): r^(j-1) on the top k choices, 0 below.
    by_rank[static_cast<std::size_t>(k - 1)] = power;
    power *= r;
    UtilityFn u;
    u.values.assign(static_cast<std::size_t>(m), Rational(0));
    for (int j = 1; j <= m; ++j)
      u.values[static_cast<std::size_t>(t.choice_at(j))] = by_rank[static_cast<std::size_t>(j - 1)];
    extremes.push_back(std::move(u));
  }
  return extremes;
}

namespace {

struct GainKey {
  std::array<std::int32_t, 8> g{};
  bool operator==(const GainKey& other) const { return g == other.g; }
};

struct GainKeyHash {
  std::size_t operator()(const GainKey& key) const {
    std::uint64_t h = 0x6A09E667F3BCC909ULL;
    for (std::int32_t v : key.g) h = splitmix64(h ^ static_cast<std::uint32_t>(v));
    return static_cast<std::size_t>(h);
  }
};

struct ConstraintRep {
  std::int64_t profile;
  int agent;
  int misreport;  // perm index
};

// Distinct gain vectors (truth row minus misreport row, truth-rank order)
// over the whole setting, scaled to integers by the table denominator, each
// with its first occurrence in canonical (profile, agent, misreport) order.
struct ConstraintSet {
  int m = 0;
  std::int64_t den = 1;
  std::vector<GainKey> gains;
  std::vector<ConstraintRep> reps;
};

ConstraintSet build_constraints(const AllocTable& table) {
  ConstraintSet set;
  set.m = table.m;
  set.den = table.den;
  std::unordered_map<GainKey, std::size_t, GainKeyHash> seen;
  std::vector<int> digits(static_cast<std::size_t>(table.n));
  for (std::int64_t p = 0; p < table.profiles->count(); ++p) {
    table.profiles->decode(p, digits.data());
    for (int i = 0; i < table.n; ++i) {
      int truth = digits[static_cast<std::size_t>(i)];
      const std::uint32_t* truth_row = table.row(p, i);
      const std::uint8_t* choice = table.perms->choice(truth);
      for (int mis = 0; mis < table.perms->count(); ++mis) {
        if (mis == truth) continue;
        const std::uint32_t* mis_row =
            table.row(p + (mis - truth) * table.profiles->stride(i), i);
        GainKey key;
        bool all_nonneg = true;
        for (int j = 0; j < table.m; ++j) {
          std::int32_t g = static_cast<std::int32_t>(truth_row[choice[j]]) -
                           static_cast<std::int32_t>(mis_row[choice[j]]);
          key.g[static_cast<std::size_t>(j)] = g;
          if (g < 0) all_nonneg = false;
        }
        if (all_nonneg) continue;  // never binding for any r >= 0
        if (seen.emplace(key, set.gains.size()).second) {
          set.gains.push_back(key);
          set.reps.push_back({p, i, mis});
        }
      }
    }
  }
  return set;
}

// First constraint violated at r (insertion order == canonical first
// occurrence), together with the violating extreme index; nullopt when
// r-PSP holds.
std::optional<std::pair<std::size_t, int>> first_violation(const ConstraintSet& set,
                                                           const Rational& r) {
  BigInt p = numerator(r);
  BigInt q = denominator(r);
  int m = set.m;
  std::vector<BigInt> p_pow(static_cast<std::size_t>(m));
  p_pow[0] = 1;
  for (int j = 1; j < m; ++j)
    p_pow[static_cast<std::size_t>(j)] = p_pow[static_cast<std::size_t>(j - 1)] * p;
  for (std::size_t c = 0; c < set.gains.size(); ++c) {
    const auto& g = set.gains[c].g;
    // phi_k(r) * q^(k-1) = sum_{j<=k} g_j p^(j-1) q^(k-j), k = 1..m-1.
    BigInt s = 0;
    for (int k = 1; k <= m - 1; ++k) {
      s = s * q + g[static_cast<std::size_t>(k - 1)] * p_pow[static_cast<std::size_t>(k - 1)];
      if (s < 0) return std::make_pair(c, k);
    }
  }
  return std::nullopt;
}

PspWitness make_witness(const AllocTable& table, const ConstraintRep& rep, int extreme_index) {
  return PspWitness{table.profiles->profile_at(rep.profile), rep.agent,
                    table.perms->pref_order(rep.misreport), extreme_index};
}

}  // namespace

PspResult is_r_psp(Mechanism mech, const Setting& setting, const Rational& r,
                   const CheckOptions& opts) {
  if (r < 0 || r > 1) throw InputError("URBI bound must lie in [0,1]");
  AllocTable table = build_table(mech, setting, opts);
  ConstraintSet set = build_constraints(table);
  PspResult result;
  result.profiles_checked = table.profiles->count();
  auto violation = first_violation(set, r);
  result.holds = !violation;
  if (violation)
    result.witness = make_witness(table, set.reps[violation->first], violation->second);
  return result;
}

DospResult dosp(Mechanism mech, const Setting& setting, const Rational& tol,
                const CheckOptions& opts) {
  if (tol <= 0) throw InputError("tolerance must be positive");

  // Partial strategyproofness requires swap monotonicity and upper
  // invariance; without them rho is 0 and the failing axiom is the witness.
  for (Axiom axiom : {Axiom::SwapMonotonic, Axiom::UpperInvariant}) {
    AxiomReport report = check_axiom(mech, setting, axiom, opts);
    if (!report.passed) {
      DospResult result;
      result.lo = 0;
      result.hi = 0;
      result.failed_axiom = std::move(report);
      return result;
    }
  }

  AllocTable table = build_table(mech, setting, opts);
  ConstraintSet set = build_constraints(table);

  DospResult result;
  if (auto at_one = first_violation(set, Rational(1)); !at_one) {
    result.lo = 1;
    result.hi = 1;
    return result;
  } else {
    result.hi = 1;
    result.witness = make_witness(table, set.reps[at_one->first], at_one->second);
  }
  if (auto at_zero = first_violation(set, Rational(0)); at_zero) {
    result.lo = 0;
    result.hi = 0;
    result.witness = make_witness(table, set.reps[at_zero->first], at_zero->second);
    return result;
  }
  result.lo = 0;

  while (result.hi - result.lo > tol) {
    Rational mid = (result.lo + result.hi) / 2;
    if (auto violation = first_violation(set, mid)) {
      result.hi = mid;
      result.witness = make_witness(table, set.reps[violation->first], violation->second);
    } else {
      result.lo = mid;
    }
  }
  return result;
}

}  // namespace matchlab
