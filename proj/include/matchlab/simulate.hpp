#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "matchlab/dominance.hpp"
#include "matchlab/mechanisms.hpp"
#include "matchlab/model.hpp"

namespace matchlab {

// Uniform i.i.d. ranking per agent, deterministic in (seed, index): profile
// draws use independent RNG substreams so parallel runs are order-free.
TypeProfile sample_profile(const Setting& setting, std::uint64_t seed, std::uint64_t index);

enum class ProfileMode { Exhaustive, Sampled };

struct SimConfig {
  Setting setting;
  ProfileMode mode = ProfileMode::Sampled;
  std::int64_t profiles = 0;  // sampled mode: number of draws
  std::uint64_t seed = 0;
  // Orderings per profile: 0 = enumerate all n! exactly; otherwise a common
  // random sample of this size shared by all three mechanisms.
  std::int64_t ordering_samples = 0;
  // Exhaustive mode refuses to run past this many profiles.
  std::int64_t profile_budget = 2'000'000;
  int enumeration_cap = kDefaultEnumerationCap;
  int threads = 1;
};

struct CubeRow {
  int n;
  DomRelation nbm_abm;
  DomRelation nbm_rsd;
  DomRelation abm_rsd;
  std::int64_t count;
};

struct CubeResult {
  SimConfig config;
  // All 64 relation combinations, zero counts included, in fixed code order
  // (schema stability for downstream tooling).
  std::vector<CubeRow> rows;
  std::int64_t profiles_processed = 0;
  bool exact = true;  // false when orderings were sampled

  std::int64_t count_of(DomRelation nbm_abm, DomRelation nbm_rsd, DomRelation abm_rsd) const;
};

// Classifies rank dominance between NBM, ABM and RSD at every processed
// profile and tallies the three pairwise relations.
CubeResult run_cube(const SimConfig& config);

// CSV schema: n,rel_nbm_abm,rel_nbm_rsd,rel_abm_rsd,count with codes
// INC/LSTRICT/EQ/RSTRICT. Identical configs produce byte-identical files.
void write_cube_csv(const CubeResult& result, std::ostream& out);
// Sidecar JSON: config, seed, mode, RNG name, software version.
std::string cube_sidecar_json(const CubeResult& result);

struct VerifyReport {
  std::int64_t checked = 0;
  std::int64_t violations = 0;
  // Up to a handful of witness profiles, lowest enumeration index first.
  std::vector<TypeProfile> witnesses;
};

// Exhaustively confirms RSD never strictly rank dominates NBM in the
// setting. Expected violations: 0.
VerifyReport verify_nbm_never_dominated(const Setting& setting, const SimConfig& config = {});

// Counts profiles where RSD strictly rank dominates ABM: exhaustive when
// the profile space fits the budget, otherwise `config.profiles` seeded
// samples.
VerifyReport verify_rsd_vs_abm(const Setting& setting, const SimConfig& config = {});

// Per-ordering refinement behind the never-dominated claim: for every profile
// and every priority ordering, the SD and NBM rank count vectors are either
// identical or first differ at a rank where NBM allocates strictly more.
VerifyReport verify_rank_refinement_per_ordering(const Setting& setting,
                                                 const SimConfig& config = {});

struct FcmEstimate {
  double fraction = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;
  bool exhaustive = false;
};

// Fraction of profiles at which the exact RSD allocation is
// first-choice-maximizing.
FcmEstimate estimate_fcm_probability(const Setting& setting, std::int64_t samples,
                                     std::uint64_t seed, int threads = 1);
FcmEstimate fcm_probability_exhaustive(const Setting& setting,
                                       std::int64_t profile_budget = 2'000'000);

}  // namespace matchlab
