#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matchlab/mechanisms.hpp"
#include "matchlab/model.hpp"

namespace matchlab {

// <u, row>: expected utility of an allocation row.
Rational expected_utility(const UtilityFn& u, std::span<const Rational> row);

struct Manipulation {
  PrefOrder misreport;
  Rational gain;  // strictly positive
};

// Default cap on misreport searches: m! candidate reports.
inline constexpr std::int64_t kDefaultMisreportCap = 5040;  // 7!

// Searches all m!-1 misreports of `agent`, everyone else held fixed.
// Returns the max-gain strictly profitable misreport (lexicographic
// tie-break), or nullopt. u must be consistent with the agent's type.
std::optional<Manipulation> is_manipulable_at(Mechanism mech, const Setting& setting,
                                              const TypeProfile& profile, int agent,
                                              const UtilityFn& u,
                                              std::int64_t misreport_cap = kDefaultMisreportCap,
                                              int enumeration_cap = kDefaultEnumerationCap);

// First misreport (lexicographic) whose outcome strictly FOSD-dominates the
// truthful outcome for `agent`, if any.
std::optional<PrefOrder> find_fosd_manipulation(Mechanism mech, const Setting& setting,
                                                const TypeProfile& profile, int agent,
                                                std::int64_t misreport_cap = kDefaultMisreportCap,
                                                int enumeration_cap = kDefaultEnumerationCap);

// Gain table row: one misreport of one agent with its exact utility change.
struct MisreportGain {
  int agent;
  PrefOrder misreport;
  Rational gain;
};

// Every (agent, misreport) pair's gain, in canonical order; the Table-style
// report behind the `manip` CLI subcommand.
std::vector<MisreportGain> misreport_gains(Mechanism mech, const Setting& setting,
                                           const TypeProfile& profile,
                                           const std::vector<UtilityFn>& utilities,
                                           std::optional<int> only_agent = std::nullopt,
                                           std::int64_t misreport_cap = kDefaultMisreportCap,
                                           int enumeration_cap = kDefaultEnumerationCap);

// --- Axioms -------------------------------------------------------------------

enum class Axiom {
  SwapMonotonic,
  UpperInvariant,
  LowerInvariant,
};

std::string axiom_name(Axiom a);
std::optional<Axiom> axiom_from_name(const std::string& name);

struct AxiomCounterexample {
  TypeProfile profile;
  int agent;
  int swap_rank;  // 1-based k: the misreport swaps ranks k and k+1
  std::vector<Rational> before;  // agent's row under the truthful report
  std::vector<Rational> after;   // agent's row under the swapped report
};

struct AxiomReport {
  Axiom axiom;
  Mechanism mech;
  bool passed = false;
  bool exhaustive = true;  // false => sampled profiles only (statistical verdict)
  std::int64_t profiles_checked = 0;
  std::optional<AxiomCounterexample> counterexample;
};

struct CheckOptions {
  // Exhaustive iteration allowed while (m!)^n stays within this budget.
  std::int64_t profile_budget = 2'000'000;
  // Sampled fallback size when the budget is exceeded.
  std::int64_t samples = 20'000;
  std::uint64_t seed = 0;
  int enumeration_cap = kDefaultEnumerationCap;
  int threads = 1;
};

// Verdict over all profiles of the setting (or a seeded sample when over
// budget). Failures carry the first counterexample in canonical order.
AxiomReport check_axiom(Mechanism mech, const Setting& setting, Axiom axiom,
                        const CheckOptions& opts = {});

// Re-evaluates a counterexample from scratch; true when it indeed violates
// the axiom. Keeps failure reports replayable.
bool recheck_axiom_violation(Mechanism mech, const Setting& setting, Axiom axiom,
                             const AxiomCounterexample& ce,
                             int enumeration_cap = kDefaultEnumerationCap);

// --- URBI(r) and partial strategyproofness -------------------------------------

// r * (u(a) - min u) >= u(b) - min u for every pair with u(a) > u(b).
bool urbi_member(const UtilityFn& u, const Rational& r);

// Extreme points of the closure of URBI(r) intersected with type t,
// normalized to top value 1 and min 0: u^(k) puts r^(j-1) on t's j-th
// choice for j <= k and 0 beyond, k = 1..m-1. Minimizing any linear
// functional over the closure lands on one of these.
std::vector<UtilityFn> extreme_utilities(const PrefOrder& t, const Rational& r);

struct PspWitness {
  TypeProfile profile;
  int agent;
  PrefOrder misreport;
  int extreme_index;  // k of the violating extreme utility
};

struct PspResult {
  bool holds = false;
  std::int64_t profiles_checked = 0;
  std::optional<PspWitness> witness;
};

// Exact check of r-partial strategyproofness over every profile, agent,
// misreport and extreme utility of the setting.
PspResult is_r_psp(Mechanism mech, const Setting& setting, const Rational& r,
                   const CheckOptions& opts = {});

struct DospResult {
  // rho bracketed in [lo, hi], hi - lo <= tol; the mechanism is lo-partially
  // strategyproof and not hi-partially strategyproof (unless hi == 1).
  Rational lo;
  Rational hi;
  // Binding constraint: why hi fails (absent when rho == 1).
  std::optional<PspWitness> witness;
  // Set when the swap-monotonicity/upper-invariance precondition failed;
  // rho is then 0 with the failing axiom's counterexample attached.
  std::optional<AxiomReport> failed_axiom;

  Rational midpoint() const { return (lo + hi) / 2; }
};

// Degree of strategyproofness: bisection on dyadic rationals, each probe an
// exact feasibility test. Mechanisms failing swap monotonicity or upper
// invariance get rho = 0 with the failing axiom attached.
DospResult dosp(Mechanism mech, const Setting& setting, const Rational& tol = Rational(1, 10000),
                const CheckOptions& opts = {});

}  // namespace matchlab
