#include "matchlab/mechanisms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "kernel.hpp"
#include "matchlab/rng.hpp"

namespace matchlab {

using detail::DetRunner;
using detail::factorial;

std::string mechanism_name(Mechanism mech) {
  switch (mech) {
    case Mechanism::SD: return "sd";
    case Mechanism::RSD: return "rsd";
    case Mechanism::NBM: return "nbm";
    case Mechanism::ABM: return "abm";
    case Mechanism::PS: return "ps";
    case Mechanism::NBM_PLUS: return "nbm-plus";
    case Mechanism::ABM_PLUS: return "abm-plus";
  }
  return "?";
}

std::optional<Mechanism> mechanism_from_name(const std::string& name) {
  for (Mechanism mech : {Mechanism::SD, Mechanism::RSD, Mechanism::NBM, Mechanism::ABM,
                         Mechanism::PS, Mechanism::NBM_PLUS, Mechanism::ABM_PLUS})
    if (mechanism_name(mech) == name) return mech;
  return std::nullopt;
}

namespace {

void check_inputs(const Setting& setting, const TypeProfile& profile, const PriorityOrdering* pi) {
  validate_profile(setting, profile);
  if (pi && pi->n() != setting.n) throw InputError("priority ordering length does not match n");
}

DetAssignment run_det_impl(Mechanism mech, const Setting& setting, const TypeProfile& profile,
                           const PriorityOrdering& pi) {
  DetRunner runner(setting);
  runner.set_profile(profile);
  DetAssignment out;
  out.assign.resize(static_cast<std::size_t>(setting.n));
  switch (mech) {
    case Mechanism::SD: runner.run_sd(pi.order.data(), out.assign.data()); break;
    case Mechanism::NBM: runner.run_nbm(pi.order.data(), out.assign.data()); break;
    case Mechanism::ABM: runner.run_abm(pi.order.data(), out.assign.data()); break;
    default: throw InputError(mechanism_name(mech) + " has no fixed-ordering deterministic form");
  }
  return out;
}

Mechanism det_base(Mechanism mech) {
  switch (mech) {
    case Mechanism::RSD: return Mechanism::SD;
    case Mechanism::NBM: return Mechanism::NBM;
    case Mechanism::ABM: return Mechanism::ABM;
    default:
      throw InputError("exact enumeration applies to rsd, nbm and abm, not " +
                       mechanism_name(mech));
  }
}

}  // namespace

DetAssignment sd_det(const Setting& setting, const TypeProfile& profile,
                     const PriorityOrdering& pi) {
  check_inputs(setting, profile, &pi);
  return run_det_impl(Mechanism::SD, setting, profile, pi);
}

DetAssignment nbm_det(const Setting& setting, const TypeProfile& profile,
                      const PriorityOrdering& pi) {
  check_inputs(setting, profile, &pi);
  return run_det_impl(Mechanism::NBM, setting, profile, pi);
}

DetAssignment abm_det(const Setting& setting, const TypeProfile& profile,
                      const PriorityOrdering& pi) {
  check_inputs(setting, profile, &pi);
  return run_det_impl(Mechanism::ABM, setting, profile, pi);
}

DetAssignment run_det(Mechanism mech, const Setting& setting, const TypeProfile& profile,
                      const PriorityOrdering& pi) {
  check_inputs(setting, profile, &pi);
  return run_det_impl(mech, setting, profile, pi);
}

std::vector<int> first_choice_winners(const TypeProfile& profile, const DetAssignment& a) {
  std::vector<int> winners;
  for (int i = 0; i < a.n(); ++i)
    if (a.assign[static_cast<std::size_t>(i)] == profile.types[static_cast<std::size_t>(i)].choice_at(1))
      winners.push_back(i);
  return winners;
}

Allocation CountMatrix::to_allocation() const {
  Allocation x(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) x.at(i, j) = Rational(at(i, j), den);
  return x;
}

CountMatrix exact_counts(Mechanism mech, const Setting& setting, const TypeProfile& profile,
                         int enumeration_cap) {
  check_inputs(setting, profile, nullptr);
  Mechanism base = det_base(mech);
  if (setting.n > enumeration_cap)
    throw BudgetError("setting with " + std::to_string(setting.n) +
                      " agents is too large for exact mode (cap " +
                      std::to_string(enumeration_cap) + "); use sampled_allocation");

  CountMatrix cm;
  cm.n = setting.n;
  cm.m = setting.m;
  cm.den = factorial(setting.n);
  cm.counts.assign(static_cast<std::size_t>(setting.n) * setting.m, 0);

  DetRunner runner(setting);
  runner.set_profile(profile);
  std::vector<int> out(static_cast<std::size_t>(setting.n));
  detail::for_each_ordering(setting.n, [&](const int* pi) {
    switch (base) {
      case Mechanism::SD: runner.run_sd(pi, out.data()); break;
      case Mechanism::NBM: runner.run_nbm(pi, out.data()); break;
      case Mechanism::ABM: runner.run_abm(pi, out.data()); break;
      default: break;
    }
    for (int i = 0; i < setting.n; ++i)
      ++cm.counts[static_cast<std::size_t>(i) * setting.m + out[static_cast<std::size_t>(i)]];
  });
  return cm;
}

Allocation exact_allocation(Mechanism mech, const Setting& setting, const TypeProfile& profile,
                            int enumeration_cap) {
  return exact_counts(mech, setting, profile, enumeration_cap).to_allocation();
}

SampledAllocation sampled_allocation(Mechanism mech, const Setting& setting,
                                     const TypeProfile& profile, std::int64_t samples,
                                     std::uint64_t seed) {
  check_inputs(setting, profile, nullptr);
  Mechanism base = det_base(mech);
  if (samples < 1) throw InputError("need at least one sample");

  DetRunner runner(setting);
  runner.set_profile(profile);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(setting.n) * setting.m, 0);
  std::vector<int> pi(static_cast<std::size_t>(setting.n));
  std::vector<int> out(static_cast<std::size_t>(setting.n));
  CounterRng rng(seed, 0);
  for (std::int64_t s = 0; s < samples; ++s) {
    std::iota(pi.begin(), pi.end(), 0);
    rng.shuffle(std::span<int>(pi));
    switch (base) {
      case Mechanism::SD: runner.run_sd(pi.data(), out.data()); break;
      case Mechanism::NBM: runner.run_nbm(pi.data(), out.data()); break;
      case Mechanism::ABM: runner.run_abm(pi.data(), out.data()); break;
      default: break;
    }
    for (int i = 0; i < setting.n; ++i)
      ++counts[static_cast<std::size_t>(i) * setting.m + out[static_cast<std::size_t>(i)]];
  }

  SampledAllocation result;
  result.n = setting.n;
  result.m = setting.m;
  result.samples = samples;
  result.seed = seed;
  result.mean.resize(counts.size());
  result.stderr_.resize(counts.size());
  for (std::size_t idx = 0; idx < counts.size(); ++idx) {
    double p = static_cast<double>(counts[idx]) / static_cast<double>(samples);
    result.mean[idx] = p;
    result.stderr_[idx] = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  }
  return result;
}

Allocation ps_allocation(const Setting& setting, const TypeProfile& profile) {
  check_inputs(setting, profile, nullptr);
  int n = setting.n;
  int m = setting.m;
  Allocation eaten(n, m);
  std::vector<Rational> remaining(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) remaining[static_cast<std::size_t>(j)] = setting.capacities[static_cast<std::size_t>(j)];
  std::vector<int> cursor(static_cast<std::size_t>(n), 0);
  std::vector<int> eaters(static_cast<std::size_t>(m));

  Rational t = 0;
  while (t < 1) {
    std::fill(eaters.begin(), eaters.end(), 0);
    for (int i = 0; i < n; ++i) {
      const PrefOrder& pref = profile.types[static_cast<std::size_t>(i)];
      int& cur = cursor[static_cast<std::size_t>(i)];
      while (remaining[static_cast<std::size_t>(pref.ranking()[static_cast<std::size_t>(cur)])] == 0) ++cur;
      ++eaters[static_cast<std::size_t>(pref.ranking()[static_cast<std::size_t>(cur)])];
    }
    // Next event: an object runs out, or everyone has eaten one unit.
    Rational dt = 1 - t;
    for (int j = 0; j < m; ++j) {
      if (eaters[static_cast<std::size_t>(j)] == 0) continue;
      Rational depletion = remaining[static_cast<std::size_t>(j)] / eaters[static_cast<std::size_t>(j)];
      if (depletion < dt) dt = depletion;
    }
    for (int i = 0; i < n; ++i) {
      int j = profile.types[static_cast<std::size_t>(i)].ranking()[static_cast<std::size_t>(cursor[static_cast<std::size_t>(i)])];
      eaten.at(i, j) += dt;
    }
    for (int j = 0; j < m; ++j)
      if (eaters[static_cast<std::size_t>(j)] > 0)
        remaining[static_cast<std::size_t>(j)] -= dt * eaters[static_cast<std::size_t>(j)];
    t += dt;
  }
  return eaten;
}

std::optional<Relabeling> separable_wants(const Setting& setting, const TypeProfile& profile) {
  check_inputs(setting, profile, nullptr);
  if (setting.n != 4 || setting.m != 4) return std::nullopt;
  for (int q : setting.capacities)
    if (q != 1) return std::nullopt;

  // Any relabeling preserves the first-choice multiset; the pattern needs
  // two objects demanded twice and two not at all.
  std::array<int, 4> fc{};
  for (const PrefOrder& t : profile.types) ++fc[static_cast<std::size_t>(t.choice_at(1))];
  std::array<int, 4> sorted = fc;
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted[0] == 0 && sorted[1] == 0 && sorted[2] == 2 && sorted[3] == 2)) return std::nullopt;

  std::array<int, 4> agents = {0, 1, 2, 3};
  std::sort(agents.begin(), agents.end());
  do {
    std::array<int, 4> objects = {0, 1, 2, 3};
    do {
      // Roles: objects[0]=a, [1]=b, [2]=c, [3]=d; agents[0..1] want a,
      // agents[2..3] want b; agents[0],[2] rank c over d; [1],[3] d over c.
      const PrefOrder& t0 = profile.types[static_cast<std::size_t>(agents[0])];
      const PrefOrder& t1 = profile.types[static_cast<std::size_t>(agents[1])];
      const PrefOrder& t2 = profile.types[static_cast<std::size_t>(agents[2])];
      const PrefOrder& t3 = profile.types[static_cast<std::size_t>(agents[3])];
      bool match = t0.choice_at(1) == objects[0] && t1.choice_at(1) == objects[0] &&
                   t2.choice_at(1) == objects[1] && t3.choice_at(1) == objects[1] &&
                   t0.rank_of(objects[2]) < t0.rank_of(objects[3]) &&
                   t1.rank_of(objects[3]) < t1.rank_of(objects[2]) &&
                   t2.rank_of(objects[2]) < t2.rank_of(objects[3]) &&
                   t3.rank_of(objects[3]) < t3.rank_of(objects[2]);
      if (match) {
        Relabeling rel;
        rel.agents.assign(agents.begin(), agents.end());
        rel.objects.assign(objects.begin(), objects.end());
        return rel;
      }
    } while (std::next_permutation(objects.begin(), objects.end()));
  } while (std::next_permutation(agents.begin(), agents.end()));
  return std::nullopt;
}

Allocation plus_variant(Mechanism base, const Setting& setting, const TypeProfile& profile,
                        int enumeration_cap) {
  if (base != Mechanism::NBM && base != Mechanism::ABM)
    throw InputError("plus variants exist for nbm and abm only");
  auto rel = separable_wants(setting, profile);
  if (!rel) return exact_allocation(base, setting, profile, enumeration_cap);

  // PS in relabeled space, then the matrix mapped back through the naming.
  std::vector<int> object_to_role(4);
  for (int role = 0; role < 4; ++role)
    object_to_role[static_cast<std::size_t>(rel->objects[static_cast<std::size_t>(role)])] = role;
  TypeProfile canonical;
  for (int p = 0; p < 4; ++p) {
    const PrefOrder& t = profile.types[static_cast<std::size_t>(rel->agents[static_cast<std::size_t>(p)])];
    std::vector<int> ranking(4);
    for (int r = 0; r < 4; ++r)
      ranking[static_cast<std::size_t>(r)] = object_to_role[static_cast<std::size_t>(t.ranking()[static_cast<std::size_t>(r)])];
    canonical.types.emplace_back(std::move(ranking));
  }
  Setting canonical_setting = Setting::unit(4, 4);
  Allocation ps = ps_allocation(canonical_setting, canonical);
  Allocation out(4, 4);
  for (int p = 0; p < 4; ++p)
    for (int role = 0; role < 4; ++role)
      out.at(rel->agents[static_cast<std::size_t>(p)], rel->objects[static_cast<std::size_t>(role)]) = ps.at(p, role);
  return out;
}

Allocation allocate(Mechanism mech, const Setting& setting, const TypeProfile& profile,
                    const std::optional<PriorityOrdering>& pi, int enumeration_cap) {
  check_inputs(setting, profile, pi ? &*pi : nullptr);
  if (pi) {
    if (mech != Mechanism::SD && mech != Mechanism::NBM && mech != Mechanism::ABM)
      throw InputError("a fixed ordering applies to sd, nbm and abm only");
    DetAssignment a = run_det_impl(mech, setting, profile, *pi);
    Allocation x(setting.n, setting.m);
    for (int i = 0; i < setting.n; ++i) x.at(i, a.assign[static_cast<std::size_t>(i)]) = 1;
    return x;
  }
  switch (mech) {
    case Mechanism::SD: throw InputError("sd needs an explicit priority ordering");
    case Mechanism::RSD:
    case Mechanism::NBM:
    case Mechanism::ABM: return exact_allocation(mech, setting, profile, enumeration_cap);
    case Mechanism::PS: return ps_allocation(setting, profile);
    case Mechanism::NBM_PLUS: return plus_variant(Mechanism::NBM, setting, profile, enumeration_cap);
    case Mechanism::ABM_PLUS: return plus_variant(Mechanism::ABM, setting, profile, enumeration_cap);
  }
  throw InputError("unknown mechanism");
}

}  // namespace matchlab
