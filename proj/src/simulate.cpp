#include "matchlab/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "kernel.hpp"
#include "matchlab/rng.hpp"
#include "matchlab/version.hpp"

namespace matchlab {

using detail::DetRunner;
using detail::PermSpace;
using detail::ProfileEnum;

TypeProfile sample_profile(const Setting& setting, std::uint64_t seed, std::uint64_t index) {
  // Stream ids are doubled so ordering sampling can use the odd ids.
  CounterRng rng(seed, index * 2);
  TypeProfile profile;
  profile.types.reserve(static_cast<std::size_t>(setting.n));
  std::vector<int> ranking(static_cast<std::size_t>(setting.m));
  for (int i = 0; i < setting.n; ++i) {
    std::iota(ranking.begin(), ranking.end(), 0);
    rng.shuffle(std::span<int>(ranking));
    profile.types.emplace_back(ranking);
  }
  return profile;
}

namespace {

constexpr std::array<DomRelation, 4> kRelationOrder = {
    DomRelation::LeftStrict, DomRelation::Equal, DomRelation::RightStrict,
    DomRelation::Incomparable};

int relation_slot(DomRelation r) {
  switch (r) {
    case DomRelation::LeftStrict: return 0;
    case DomRelation::Equal: return 1;
    case DomRelation::RightStrict: return 2;
    case DomRelation::Incomparable: return 3;
  }
  return 3;
}

DomRelation compare_rank_counts(const std::int64_t* a, const std::int64_t* b, int m) {
  bool left = false, right = false;
  std::int64_t ca = 0, cb = 0;
  for (int k = 0; k < m; ++k) {
    ca += a[k];
    cb += b[k];
    if (ca > cb) left = true;
    else if (cb > ca) right = true;
  }
  if (left && right) return DomRelation::Incomparable;
  if (left) return DomRelation::LeftStrict;
  if (right) return DomRelation::RightStrict;
  return DomRelation::Equal;
}

// Rank counts of SD, NBM and ABM over a shared set of orderings (all n! or
// a common random sample), accumulated as integers.
struct TriCounts {
  std::vector<std::int64_t> sd, nbm, abm;
  std::int64_t orderings = 0;

  explicit TriCounts(int m)
      : sd(static_cast<std::size_t>(m), 0),
        nbm(static_cast<std::size_t>(m), 0),
        abm(static_cast<std::size_t>(m), 0) {}
};

void tri_rank_counts(DetRunner& runner, const Setting& setting, std::int64_t ordering_samples,
                     std::uint64_t seed, std::uint64_t ordering_stream, TriCounts& out,
                     std::vector<int>& pi, std::vector<int>& assign) {
  auto run_all = [&](const int* ordering) {
    runner.run_sd(ordering, assign.data());
    runner.accumulate_rank_counts(assign.data(), out.sd.data());
    runner.run_nbm(ordering, assign.data());
    runner.accumulate_rank_counts(assign.data(), out.nbm.data());
    runner.run_abm(ordering, assign.data());
    runner.accumulate_rank_counts(assign.data(), out.abm.data());
    ++out.orderings;
  };
  if (ordering_samples == 0) {
    detail::for_each_ordering(setting.n, run_all);
  } else {
    CounterRng rng(seed, ordering_stream);
    for (std::int64_t s = 0; s < ordering_samples; ++s) {
      std::iota(pi.begin(), pi.end(), 0);
      rng.shuffle(std::span<int>(pi));
      run_all(pi.data());
    }
  }
  // Round-1 equivalence: NBM and ABM award identical first choices under
  // every ordering, so their first-choice counts must agree exactly.
  if (out.nbm.front() != out.abm.front())
    throw Error("internal invariant violated: d_1(NBM) != d_1(ABM)");
}

void require_exact_cap(const SimConfig& config) {
  if (config.ordering_samples == 0 && config.setting.n > config.enumeration_cap)
    throw BudgetError("exact ordering enumeration capped at " +
                      std::to_string(config.enumeration_cap) +
                      " agents; sample orderings instead");
}

}  // namespace

std::int64_t CubeResult::count_of(DomRelation nbm_abm, DomRelation nbm_rsd,
                                  DomRelation abm_rsd) const {
  for (const CubeRow& row : rows)
    if (row.nbm_abm == nbm_abm && row.nbm_rsd == nbm_rsd && row.abm_rsd == abm_rsd)
      return row.count;
  return 0;
}

CubeResult run_cube(const SimConfig& config) {
  const Setting& setting = config.setting;
  require_exact_cap(config);

  std::int64_t total = 0;
  std::unique_ptr<PermSpace> perms;
  std::unique_ptr<ProfileEnum> space;
  if (config.mode == ProfileMode::Exhaustive) {
    perms = std::make_unique<PermSpace>(setting.m);
    space = std::make_unique<ProfileEnum>(*perms, setting.n, config.profile_budget);
    total = space->count();
  } else {
    if (config.profiles < 1) throw InputError("sampled mode needs a positive profile count");
    total = config.profiles;
  }

  int threads = std::max(1, config.threads);
  std::vector<std::array<std::int64_t, 64>> chunk_tallies(
      static_cast<std::size_t>(threads), std::array<std::int64_t, 64>{});

  detail::parallel_chunks(total, threads, [&](int chunk, std::int64_t begin, std::int64_t end) {
    DetRunner runner(setting);
    std::vector<int> digits(static_cast<std::size_t>(setting.n));
    std::vector<int> pi(static_cast<std::size_t>(setting.n));
    std::vector<int> assign(static_cast<std::size_t>(setting.n));
    auto& tally = chunk_tallies[static_cast<std::size_t>(chunk)];
    for (std::int64_t idx = begin; idx < end; ++idx) {
      TypeProfile sampled;
      if (space) {
        space->decode(idx, digits.data());
        runner.set_profile(*perms, digits.data());
      } else {
        sampled = sample_profile(setting, config.seed, static_cast<std::uint64_t>(idx));
        runner.set_profile(sampled);
      }
      TriCounts counts(setting.m);
      tri_rank_counts(runner, setting, config.ordering_samples, config.seed,
                      static_cast<std::uint64_t>(idx) * 2 + 1, counts, pi, assign);
      int slot = relation_slot(compare_rank_counts(counts.nbm.data(), counts.abm.data(), setting.m)) * 16 +
                 relation_slot(compare_rank_counts(counts.nbm.data(), counts.sd.data(), setting.m)) * 4 +
                 relation_slot(compare_rank_counts(counts.abm.data(), counts.sd.data(), setting.m));
      ++tally[static_cast<std::size_t>(slot)];
    }
  });

  std::array<std::int64_t, 64> tally{};
  for (const auto& chunk : chunk_tallies)
    for (int s = 0; s < 64; ++s) tally[static_cast<std::size_t>(s)] += chunk[static_cast<std::size_t>(s)];

  CubeResult result;
  result.config = config;
  result.profiles_processed = total;
  result.exact = config.ordering_samples == 0;
  for (DomRelation r_na : kRelationOrder)
    for (DomRelation r_nr : kRelationOrder)
      for (DomRelation r_ar : kRelationOrder) {
        int slot = relation_slot(r_na) * 16 + relation_slot(r_nr) * 4 + relation_slot(r_ar);
        result.rows.push_back({setting.n, r_na, r_nr, r_ar, tally[static_cast<std::size_t>(slot)]});
      }
  return result;
}

void write_cube_csv(const CubeResult& result, std::ostream& out) {
  out << "n,rel_nbm_abm,rel_nbm_rsd,rel_abm_rsd,count\n";
  for (const CubeRow& row : result.rows)
    out << row.n << ',' << dom_relation_code(row.nbm_abm) << ',' << dom_relation_code(row.nbm_rsd)
        << ',' << dom_relation_code(row.abm_rsd) << ',' << row.count << '\n';
}

std::string cube_sidecar_json(const CubeResult& result) {
  nlohmann::json j;
  j["config"] = {
      {"n", result.config.setting.n},
      {"m", result.config.setting.m},
      {"capacities", result.config.setting.capacities},
      {"mode", result.config.mode == ProfileMode::Exhaustive ? "exhaustive" : "sampled"},
      {"profiles", result.config.profiles},
      {"seed", result.config.seed},
      {"ordering_samples", result.config.ordering_samples},
      {"threads", result.config.threads},
  };
  j["rng"] = kRngName;
  j["software_version"] = kVersion;
  j["profiles_processed"] = result.profiles_processed;
  j["exact"] = result.exact;
  return j.dump(2);
}

namespace {

VerifyReport scan_pairwise(const Setting& setting, const SimConfig& config, bool exhaustive,
                           std::int64_t total,
                           const std::function<bool(DetRunner&, const TypeProfile*, std::int64_t)>& is_violation) {
  // is_violation sees a runner already bound to the profile.
  int threads = std::max(1, config.threads);
  std::unique_ptr<PermSpace> perms;
  std::unique_ptr<ProfileEnum> space;
  if (exhaustive) {
    perms = std::make_unique<PermSpace>(setting.m);
    space = std::make_unique<ProfileEnum>(*perms, setting.n, config.profile_budget);
    total = space->count();
  }

  std::vector<std::int64_t> chunk_violations(static_cast<std::size_t>(threads), 0);
  std::vector<std::vector<std::int64_t>> chunk_witnesses(static_cast<std::size_t>(threads));

  detail::parallel_chunks(total, threads, [&](int chunk, std::int64_t begin, std::int64_t end) {
    DetRunner runner(setting);
    std::vector<int> digits(static_cast<std::size_t>(setting.n));
    for (std::int64_t idx = begin; idx < end; ++idx) {
      TypeProfile sampled;
      const TypeProfile* profile_ptr = nullptr;
      if (space) {
        space->decode(idx, digits.data());
        runner.set_profile(*perms, digits.data());
      } else {
        sampled = sample_profile(setting, config.seed, static_cast<std::uint64_t>(idx));
        runner.set_profile(sampled);
        profile_ptr = &sampled;
      }
      if (is_violation(runner, profile_ptr, idx)) {
        ++chunk_violations[static_cast<std::size_t>(chunk)];
        if (chunk_witnesses[static_cast<std::size_t>(chunk)].size() < 10)
          chunk_witnesses[static_cast<std::size_t>(chunk)].push_back(idx);
      }
    }
  });

  VerifyReport report;
  report.checked = total;
  for (std::int64_t v : chunk_violations) report.violations += v;
  std::vector<std::int64_t> witness_idx;
  for (const auto& chunk : chunk_witnesses)
    witness_idx.insert(witness_idx.end(), chunk.begin(), chunk.end());
  std::sort(witness_idx.begin(), witness_idx.end());
  if (witness_idx.size() > 10) witness_idx.resize(10);
  for (std::int64_t idx : witness_idx)
    report.witnesses.push_back(space ? space->profile_at(idx)
                                     : sample_profile(setting, config.seed,
                                                      static_cast<std::uint64_t>(idx)));
  return report;
}

}  // namespace

VerifyReport verify_nbm_never_dominated(const Setting& setting, const SimConfig& config) {
  SimConfig cfg = config;
  cfg.setting = setting;
  cfg.ordering_samples = 0;  // the claim is exact; no statistical shortcut
  require_exact_cap(cfg);
  return scan_pairwise(setting, cfg, /*exhaustive=*/true, 0,
                       [&cfg, &setting](DetRunner& runner, const TypeProfile*, std::int64_t idx) {
                         std::vector<int> pi(static_cast<std::size_t>(setting.n));
                         std::vector<int> assign(static_cast<std::size_t>(setting.n));
                         TriCounts counts(setting.m);
                         tri_rank_counts(runner, setting, 0, cfg.seed,
                                         static_cast<std::uint64_t>(idx) * 2 + 1, counts, pi, assign);
                         return compare_rank_counts(counts.sd.data(), counts.nbm.data(),
                                                    setting.m) == DomRelation::LeftStrict;
                       });
}

VerifyReport verify_rsd_vs_abm(const Setting& setting, const SimConfig& config) {
  SimConfig cfg = config;
  cfg.setting = setting;
  cfg.ordering_samples = 0;  // allocations per profile stay exact
  require_exact_cap(cfg);
  bool exhaustive =
      cfg.mode == ProfileMode::Exhaustive ||
      ProfileEnum::space_size(static_cast<int>(detail::factorial(setting.m)), setting.n,
                              cfg.profile_budget)
          .has_value();
  if (!exhaustive && cfg.profiles < 1)
    throw InputError("profile space too large for exhaustive scan; set a sample count");
  return scan_pairwise(setting, cfg, exhaustive, cfg.profiles,
                       [&cfg, &setting](DetRunner& runner, const TypeProfile*, std::int64_t idx) {
                         std::vector<int> pi(static_cast<std::size_t>(setting.n));
                         std::vector<int> assign(static_cast<std::size_t>(setting.n));
                         TriCounts counts(setting.m);
                         tri_rank_counts(runner, setting, 0, cfg.seed,
                                         static_cast<std::uint64_t>(idx) * 2 + 1, counts, pi, assign);
                         return compare_rank_counts(counts.sd.data(), counts.abm.data(),
                                                    setting.m) == DomRelation::LeftStrict;
                       });
}

VerifyReport verify_rank_refinement_per_ordering(const Setting& setting, const SimConfig& config) {
  SimConfig cfg = config;
  cfg.setting = setting;
  if (setting.n > cfg.enumeration_cap)
    throw BudgetError("per-ordering refinement check enumerates all orderings exactly");
  return scan_pairwise(
      setting, cfg, /*exhaustive=*/true, 0,
      [&](DetRunner& runner, const TypeProfile*, std::int64_t) {
        // For every ordering the SD and NBM rank count vectors must be
        // identical or first differ at a rank where NBM allocates more.
        bool violated = false;
        std::vector<int> assign(static_cast<std::size_t>(setting.n));
        std::vector<std::int64_t> sd(static_cast<std::size_t>(setting.m));
        std::vector<std::int64_t> nbm(static_cast<std::size_t>(setting.m));
        detail::for_each_ordering(setting.n, [&](const int* pi) {
          if (violated) return;
          std::fill(sd.begin(), sd.end(), 0);
          std::fill(nbm.begin(), nbm.end(), 0);
          runner.run_sd(pi, assign.data());
          runner.accumulate_rank_counts(assign.data(), sd.data());
          runner.run_nbm(pi, assign.data());
          runner.accumulate_rank_counts(assign.data(), nbm.data());
          for (int k = 0; k < setting.m; ++k) {
            if (sd[static_cast<std::size_t>(k)] == nbm[static_cast<std::size_t>(k)]) continue;
            violated = sd[static_cast<std::size_t>(k)] > nbm[static_cast<std::size_t>(k)];
            break;
          }
        });
        return violated;
      });
}

namespace {

bool rsd_is_fcm(DetRunner& runner, const Setting& setting, int d1max, std::vector<int>& assign) {
  // RSD maximizes expected first choices iff every ordering does.
  bool fcm = true;
  detail::for_each_ordering(setting.n, [&](const int* pi) {
    if (!fcm) return;
    runner.run_sd(pi, assign.data());
    if (runner.first_choice_count(assign.data()) < d1max) fcm = false;
  });
  return fcm;
}

int d1max_of(const Setting& setting, const TypeProfile* profile, const PermSpace* perms,
             const int* digits) {
  std::vector<int> first_counts(static_cast<std::size_t>(setting.m), 0);
  if (profile) {
    for (const PrefOrder& t : profile->types) ++first_counts[static_cast<std::size_t>(t.choice_at(1))];
  } else {
    for (int i = 0; i < setting.n; ++i) ++first_counts[perms->choice(digits[i])[0]];
  }
  int total = 0;
  for (int j = 0; j < setting.m; ++j)
    total += std::min(first_counts[static_cast<std::size_t>(j)],
                      setting.capacities[static_cast<std::size_t>(j)]);
  return total;
}

}  // namespace

FcmEstimate estimate_fcm_probability(const Setting& setting, std::int64_t samples,
                                     std::uint64_t seed, int threads) {
  if (samples < 1) throw InputError("need at least one sample");
  if (setting.n > kDefaultEnumerationCap)
    throw BudgetError("first-choice-maximization checks enumerate all orderings exactly");
  std::vector<std::int64_t> hits(static_cast<std::size_t>(std::max(1, threads)), 0);
  detail::parallel_chunks(samples, threads, [&](int chunk, std::int64_t begin, std::int64_t end) {
    DetRunner runner(setting);
    std::vector<int> assign(static_cast<std::size_t>(setting.n));
    for (std::int64_t idx = begin; idx < end; ++idx) {
      TypeProfile profile = sample_profile(setting, seed, static_cast<std::uint64_t>(idx));
      runner.set_profile(profile);
      int d1max = d1max_of(setting, &profile, nullptr, nullptr);
      if (rsd_is_fcm(runner, setting, d1max, assign)) ++hits[static_cast<std::size_t>(chunk)];
    }
  });
  std::int64_t total_hits = std::accumulate(hits.begin(), hits.end(), std::int64_t{0});
  FcmEstimate est;
  est.samples = samples;
  est.fraction = static_cast<double>(total_hits) / static_cast<double>(samples);
  est.stderr_ = std::sqrt(est.fraction * (1.0 - est.fraction) / static_cast<double>(samples));
  return est;
}

FcmEstimate fcm_probability_exhaustive(const Setting& setting, std::int64_t profile_budget) {
  if (setting.n > kDefaultEnumerationCap)
    throw BudgetError("first-choice-maximization checks enumerate all orderings exactly");
  PermSpace perms(setting.m);
  ProfileEnum space(perms, setting.n, profile_budget);
  DetRunner runner(setting);
  std::vector<int> digits(static_cast<std::size_t>(setting.n));
  std::vector<int> assign(static_cast<std::size_t>(setting.n));
  std::int64_t hits = 0;
  for (std::int64_t idx = 0; idx < space.count(); ++idx) {
    space.decode(idx, digits.data());
    runner.set_profile(perms, digits.data());
    int d1max = d1max_of(setting, nullptr, &perms, digits.data());
    if (rsd_is_fcm(runner, setting, d1max, assign)) ++hits;
  }
  FcmEstimate est;
  est.samples = space.count();
  est.exhaustive = true;
  est.fraction = static_cast<double>(hits) / static_cast<double>(space.count());
  est.stderr_ = 0.0;
  return est;
}

}  // namespace matchlab
