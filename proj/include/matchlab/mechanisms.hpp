#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matchlab/model.hpp"

namespace matchlab {

enum class Mechanism {
  SD,        // serial dictatorship with an explicit priority ordering
  RSD,       // SD averaged uniformly over all n! orderings
  NBM,       // naive Boston
  ABM,       // adaptive Boston
  PS,        // probabilistic serial (simultaneous eating)
  NBM_PLUS,  // NBM patched with PS at separable-wants profiles
  ABM_PLUS,  // ABM patched likewise
};

std::string mechanism_name(Mechanism mech);
std::optional<Mechanism> mechanism_from_name(const std::string& name);

// Orderings enumerated exactly up to this many agents by default (8! =
// 40320 deterministic runs per allocation).
inline constexpr int kDefaultEnumerationCap = 8;

// --- Deterministic, fixed-ordering mechanisms -------------------------------

// Agents pick in pi order; each takes its most-preferred object with
// remaining capacity.
DetAssignment sd_det(const Setting& setting, const TypeProfile& profile,
                     const PriorityOrdering& pi);

// Round k: every unassigned agent applies to its reported k-th choice, even
// if that object is already exhausted (the naivete under test). Within an
// object, priority wins until capacity runs out. Agents never re-apply to a
// previously applied object.
DetAssignment nbm_det(const Setting& setting, const TypeProfile& profile,
                      const PriorityOrdering& pi);

// Round k: every unassigned agent applies to its most-preferred object with
// non-zero remaining capacity as of the start of the round; exhausted
// objects are skipped. Priority resolves contention.
DetAssignment abm_det(const Setting& setting, const TypeProfile& profile,
                      const PriorityOrdering& pi);

DetAssignment run_det(Mechanism mech, const Setting& setting, const TypeProfile& profile,
                      const PriorityOrdering& pi);

// Agents that received their (reported) first choice. For NBM/ABM these are
// exactly the round-1 winners, and the two mechanisms always agree on them.
std::vector<int> first_choice_winners(const TypeProfile& profile, const DetAssignment& a);

// --- Exact probabilistic allocations ----------------------------------------

// Integer form of an enumeration average: probability = counts[i][j] / den,
// den = n!. The compact representation all heavy loops work on.
struct CountMatrix {
  int n = 0;
  int m = 0;
  std::int64_t den = 1;
  std::vector<std::int64_t> counts;  // row-major

  std::int64_t at(int agent, int object) const {
    return counts[static_cast<std::size_t>(agent) * m + object];
  }
  Allocation to_allocation() const;
};

// Average of the deterministic mechanism over all n! priority orderings.
// mech must be RSD, NBM or ABM. Throws BudgetError when n exceeds the cap.
CountMatrix exact_counts(Mechanism mech, const Setting& setting, const TypeProfile& profile,
                         int enumeration_cap = kDefaultEnumerationCap);
Allocation exact_allocation(Mechanism mech, const Setting& setting, const TypeProfile& profile,
                            int enumeration_cap = kDefaultEnumerationCap);

// Monte Carlo estimate of exact_allocation over uniformly drawn orderings.
// Deterministic for a fixed seed. stderr entries are sqrt(p(1-p)/samples).
struct SampledAllocation {
  int n = 0;
  int m = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> mean;    // row-major
  std::vector<double> stderr_;  // row-major

  double mean_at(int agent, int object) const {
    return mean[static_cast<std::size_t>(agent) * m + object];
  }
  double stderr_at(int agent, int object) const {
    return stderr_[static_cast<std::size_t>(agent) * m + object];
  }
};

SampledAllocation sampled_allocation(Mechanism mech, const Setting& setting,
                                     const TypeProfile& profile, std::int64_t samples,
                                     std::uint64_t seed);

// --- Probabilistic serial ----------------------------------------------------

// Simultaneous eating at unit speed; object j carries q_j units of mass.
// Event-driven over exact rational breakpoints, so the result is exact.
Allocation ps_allocation(const Setting& setting, const TypeProfile& profile);

// --- Separable wants and the frontier-improving variants ---------------------

// Renaming that maps the canonical pattern onto the profile:
// agents()[p] is the profile agent playing canonical role p, objects()[r]
// the profile object playing canonical role r (roles a,b,c,d = 0..3).
struct Relabeling {
  std::vector<int> agents;
  std::vector<int> objects;
};

// Pattern (after renaming): agents 0,1 rank a first and 2,3 rank b first;
// agents 0,2 rank c over d; agents 1,3 rank d over c. Only n = m = 4 with
// unit capacities can match. Searches all 4!*4! relabelings.
std::optional<Relabeling> separable_wants(const Setting& setting, const TypeProfile& profile);

// NBM+/ABM+: PS applied through the relabeling at separable-wants profiles,
// the base mechanism's exact allocation everywhere else.
Allocation plus_variant(Mechanism base, const Setting& setting, const TypeProfile& profile,
                        int enumeration_cap = kDefaultEnumerationCap);

// Dispatcher used by the CLI and bindings: handles RSD/NBM/ABM (exact), PS,
// and the plus variants; SD and fixed-ordering NBM/ABM when pi is given.
Allocation allocate(Mechanism mech, const Setting& setting, const TypeProfile& profile,
                    const std::optional<PriorityOrdering>& pi = std::nullopt,
                    int enumeration_cap = kDefaultEnumerationCap);

}  // namespace matchlab
