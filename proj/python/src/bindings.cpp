// Python surface for the matchlab core: exact allocations, dominance
// classification, incentive analysis and the simulation harness. Exact
// rationals cross the boundary as fractions.Fraction.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "matchlab/dominance.hpp"
#include "matchlab/incentives.hpp"
#include "matchlab/mechanisms.hpp"
#include "matchlab/profile_io.hpp"
#include "matchlab/simulate.hpp"
#include "matchlab/version.hpp"

namespace py = pybind11;
using namespace matchlab;

namespace {

py::object to_fraction(const Rational& r) {
  static py::object fraction_type = py::module_::import("fractions").attr("Fraction");
  return fraction_type(rational_to_string(r));
}

Rational rational_from_py(const py::handle& obj) {
  return rational_from_string(py::cast<std::string>(py::str(obj)));
}

TypeProfile profile_from_rankings(const std::vector<std::vector<int>>& rankings) {
  TypeProfile profile;
  for (const auto& ranking : rankings) profile.types.emplace_back(ranking);
  return profile;
}

Setting setting_from(const std::vector<std::vector<int>>& rankings,
                     const std::optional<std::vector<int>>& capacities) {
  if (rankings.empty()) throw InputError("no agents");
  int n = static_cast<int>(rankings.size());
  int m = static_cast<int>(rankings.front().size());
  return Setting(n, m, capacities.value_or(std::vector<int>(static_cast<std::size_t>(m), 1)));
}

Mechanism mech_from(const std::string& name) {
  auto mech = mechanism_from_name(name);
  if (!mech) throw InputError("unknown mechanism '" + name + "'");
  return *mech;
}

py::list matrix_to_py(const Allocation& x) {
  py::list rows;
  for (int i = 0; i < x.n(); ++i) {
    py::list row;
    for (int j = 0; j < x.m(); ++j) row.append(to_fraction(x.at(i, j)));
    rows.append(std::move(row));
  }
  return rows;
}

Allocation matrix_from_py(const py::sequence& rows) {
  int n = static_cast<int>(py::len(rows));
  if (n == 0) throw InputError("empty allocation");
  int m = static_cast<int>(py::len(rows[0]));
  Allocation x(n, m);
  for (int i = 0; i < n; ++i) {
    py::sequence row = py::cast<py::sequence>(rows[i]);
    if (static_cast<int>(py::len(row)) != m) throw InputError("ragged allocation matrix");
    for (int j = 0; j < m; ++j) x.at(i, j) = rational_from_py(row[j]);
  }
  return x;
}

py::list fractions_to_py(const std::vector<Rational>& values) {
  py::list out;
  for (const Rational& v : values) out.append(to_fraction(v));
  return out;
}

py::dict axiom_report_to_py(const AxiomReport& report) {
  py::dict out;
  out["mechanism"] = mechanism_name(report.mech);
  out["axiom"] = axiom_name(report.axiom);
  out["passed"] = report.passed;
  out["exhaustive"] = report.exhaustive;
  out["profiles_checked"] = report.profiles_checked;
  if (report.counterexample) {
    const AxiomCounterexample& ce = *report.counterexample;
    py::dict c;
    py::list rankings;
    for (const PrefOrder& t : ce.profile.types) rankings.append(t.ranking());
    c["profile"] = std::move(rankings);
    c["agent"] = ce.agent;
    c["swap_rank"] = ce.swap_rank;
    c["before"] = fractions_to_py(ce.before);
    c["after"] = fractions_to_py(ce.after);
    out["counterexample"] = std::move(c);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_matchlab, mod) {
  mod.doc() = "Exact one-sided matching mechanism laboratory (C++ core)";
  mod.attr("__version__") = kVersion;

  py::register_exception<InputError>(mod, "InputError", PyExc_ValueError);
  py::register_exception<BudgetError>(mod, "BudgetError", PyExc_RuntimeError);

  mod.def(
      "allocate",
      [](const std::string& mech, const std::vector<std::vector<int>>& rankings,
         const std::optional<std::vector<int>>& capacities,
         const std::optional<std::vector<int>>& ordering) {
        Setting setting = setting_from(rankings, capacities);
        std::optional<PriorityOrdering> pi;
        if (ordering) pi = PriorityOrdering(*ordering);
        return matrix_to_py(allocate(mech_from(mech), setting, profile_from_rankings(rankings), pi));
      },
      py::arg("mechanism"), py::arg("rankings"), py::arg("capacities") = std::nullopt,
      py::arg("ordering") = std::nullopt,
      "Exact allocation matrix (rsd/nbm/abm/ps/nbm-plus/abm-plus; sd and "
      "fixed-ordering nbm/abm with `ordering`, 0-based, highest priority first)");

  mod.def(
      "run_det",
      [](const std::string& mech, const std::vector<std::vector<int>>& rankings,
         const std::vector<int>& ordering, const std::optional<std::vector<int>>& capacities) {
        Setting setting = setting_from(rankings, capacities);
        return run_det(mech_from(mech), setting, profile_from_rankings(rankings),
                       PriorityOrdering(ordering))
            .assign;
      },
      py::arg("mechanism"), py::arg("rankings"), py::arg("ordering"),
      py::arg("capacities") = std::nullopt,
      "One deterministic pass (sd/nbm/abm) under a fixed priority ordering");

  mod.def(
      "sampled_allocation",
      [](const std::string& mech, const std::vector<std::vector<int>>& rankings,
         std::int64_t samples, std::uint64_t seed,
         const std::optional<std::vector<int>>& capacities) {
        Setting setting = setting_from(rankings, capacities);
        SampledAllocation sa =
            sampled_allocation(mech_from(mech), setting, profile_from_rankings(rankings), samples, seed);
        py::list mean, se;
        for (int i = 0; i < sa.n; ++i) {
          py::list mrow, srow;
          for (int j = 0; j < sa.m; ++j) {
            mrow.append(sa.mean_at(i, j));
            srow.append(sa.stderr_at(i, j));
          }
          mean.append(std::move(mrow));
          se.append(std::move(srow));
        }
        py::dict out;
        out["mean"] = std::move(mean);
        out["stderr"] = std::move(se);
        out["samples"] = sa.samples;
        out["seed"] = sa.seed;
        return out;
      },
      py::arg("mechanism"), py::arg("rankings"), py::arg("samples"), py::arg("seed") = 0,
      py::arg("capacities") = std::nullopt);

  mod.def(
      "rank_distribution",
      [](const py::sequence& matrix, const std::vector<std::vector<int>>& rankings) {
        return fractions_to_py(
            rank_distribution(matrix_from_py(matrix), profile_from_rankings(rankings)).d);
      },
      py::arg("matrix"), py::arg("rankings"));

  mod.def(
      "rank_compare",
      [](const py::sequence& x, const py::sequence& y,
         const std::vector<std::vector<int>>& rankings) {
        return dom_relation_code(
            rank_compare(matrix_from_py(x), matrix_from_py(y), profile_from_rankings(rankings)));
      },
      py::arg("x"), py::arg("y"), py::arg("rankings"),
      "LSTRICT / EQ / RSTRICT / INC, x relative to y");

  mod.def(
      "ordinal_compare",
      [](const py::sequence& x, const py::sequence& y,
         const std::vector<std::vector<int>>& rankings) {
        return dom_relation_code(
            ordinal_compare(matrix_from_py(x), matrix_from_py(y), profile_from_rankings(rankings)));
      },
      py::arg("x"), py::arg("y"), py::arg("rankings"));

  mod.def(
      "fosd",
      [](const py::sequence& v, const py::sequence& w, const std::vector<int>& ranking) {
        std::vector<Rational> rv, rw;
        for (const auto& e : v) rv.push_back(rational_from_py(e));
        for (const auto& e : w) rw.push_back(rational_from_py(e));
        return dom_relation_code(fosd(rv, rw, PrefOrder(ranking)));
      },
      py::arg("v"), py::arg("w"), py::arg("ranking"));

  mod.def(
      "d1_max",
      [](const std::vector<std::vector<int>>& rankings,
         const std::optional<std::vector<int>>& capacities) {
        Setting setting = setting_from(rankings, capacities);
        return to_fraction(d1_max(setting, profile_from_rankings(rankings)));
      },
      py::arg("rankings"), py::arg("capacities") = std::nullopt);

  mod.def(
      "is_first_choice_maximizing",
      [](const py::sequence& matrix, const std::vector<std::vector<int>>& rankings,
         const std::optional<std::vector<int>>& capacities) {
        Setting setting = setting_from(rankings, capacities);
        return is_first_choice_maximizing(matrix_from_py(matrix), setting,
                                          profile_from_rankings(rankings));
      },
      py::arg("matrix"), py::arg("rankings"), py::arg("capacities") = std::nullopt);

  mod.def(
      "has_overlap",
      [](const std::vector<std::vector<int>>& rankings) {
        Setting setting = setting_from(rankings, std::nullopt);
        return has_overlap(setting, profile_from_rankings(rankings));
      },
      py::arg("rankings"));

  mod.def(
      "is_pareto_efficient",
      [](const std::vector<int>& assignment, const std::vector<std::vector<int>>& rankings,
         const std::optional<std::vector<int>>& capacities) {
        Setting setting = setting_from(rankings, capacities);
        DetAssignment a{assignment};
        ParetoResult r = is_pareto_efficient_det(a, setting, profile_from_rankings(rankings));
        py::list steps;
        for (const TradeStep& s : r.improvement)
          steps.append(py::make_tuple(s.agent, s.from_object, s.to_object));
        return py::make_tuple(r.efficient, std::move(steps));
      },
      py::arg("assignment"), py::arg("rankings"), py::arg("capacities") = std::nullopt,
      "(efficient, improvement_steps)");

  mod.def(
      "separable_wants",
      [](const std::vector<std::vector<int>>& rankings)
          -> std::optional<std::pair<std::vector<int>, std::vector<int>>> {
        Setting setting = setting_from(rankings, std::nullopt);
        auto rel = separable_wants(setting, profile_from_rankings(rankings));
        if (!rel) return std::nullopt;
        return std::make_pair(rel->agents, rel->objects);
      },
      py::arg("rankings"), "None or (agent_roles, object_roles)");

  mod.def(
      "expected_utility",
      [](const py::sequence& utility_by_object, const py::sequence& row) {
        UtilityFn u;
        for (const auto& v : utility_by_object) u.values.push_back(rational_from_py(v));
        std::vector<Rational> r;
        for (const auto& v : row) r.push_back(rational_from_py(v));
        return to_fraction(expected_utility(u, r));
      },
      py::arg("utility_by_object"), py::arg("row"));

  mod.def(
      "is_manipulable_at",
      [](const std::string& mech, const std::vector<std::vector<int>>& rankings, int agent,
         const py::sequence& utility_by_rank, const std::optional<std::vector<int>>& capacities)
          -> py::object {
        Setting setting = setting_from(rankings, capacities);
        TypeProfile profile = profile_from_rankings(rankings);
        std::vector<Rational> by_rank;
        for (const auto& v : utility_by_rank) by_rank.push_back(rational_from_py(v));
        UtilityFn u = UtilityFn::from_rank_values(profile.types[static_cast<std::size_t>(agent)], by_rank);
        auto manip = is_manipulable_at(mech_from(mech), setting, profile, agent, u);
        if (!manip) return py::none();
        return py::make_tuple(manip->misreport.ranking(), to_fraction(manip->gain));
      },
      py::arg("mechanism"), py::arg("rankings"), py::arg("agent"), py::arg("utility_by_rank"),
      py::arg("capacities") = std::nullopt,
      "None, or (best_misreport_ranking, gain) when a profitable misreport exists");

  mod.def(
      "find_fosd_manipulation",
      [](const std::string& mech, const std::vector<std::vector<int>>& rankings, int agent,
         const std::optional<std::vector<int>>& capacities) -> py::object {
        Setting setting = setting_from(rankings, capacities);
        auto mis = find_fosd_manipulation(mech_from(mech), setting, profile_from_rankings(rankings), agent);
        if (!mis) return py::none();
        return py::cast(mis->ranking());
      },
      py::arg("mechanism"), py::arg("rankings"), py::arg("agent"),
      py::arg("capacities") = std::nullopt);

  mod.def(
      "check_axiom",
      [](const std::string& mech, int n, int m, const std::string& axiom,
         const std::optional<std::vector<int>>& capacities) {
        Setting setting(n, m, capacities.value_or(std::vector<int>(static_cast<std::size_t>(m), 1)));
        auto ax = axiom_from_name(axiom);
        if (!ax) throw InputError("unknown axiom '" + axiom + "'");
        return axiom_report_to_py(check_axiom(mech_from(mech), setting, *ax));
      },
      py::arg("mechanism"), py::arg("n"), py::arg("m"), py::arg("axiom"),
      py::arg("capacities") = std::nullopt);

  mod.def(
      "dosp",
      [](const std::string& mech, int n, int m, const std::optional<std::vector<int>>& capacities,
         const std::string& tol) {
        Setting setting(n, m, capacities.value_or(std::vector<int>(static_cast<std::size_t>(m), 1)));
        DospResult r = dosp(mech_from(mech), setting, rational_from_string(tol));
        py::dict out;
        out["rho_lo"] = to_fraction(r.lo);
        out["rho_hi"] = to_fraction(r.hi);
        out["rho"] = to_double(r.midpoint());
        if (r.witness) {
          py::dict w;
          py::list rankings;
          for (const PrefOrder& t : r.witness->profile.types) rankings.append(t.ranking());
          w["profile"] = std::move(rankings);
          w["agent"] = r.witness->agent;
          w["misreport"] = r.witness->misreport.ranking();
          w["extreme_index"] = r.witness->extreme_index;
          out["witness"] = std::move(w);
        }
        if (r.failed_axiom) out["failed_axiom"] = axiom_report_to_py(*r.failed_axiom);
        return out;
      },
      py::arg("mechanism"), py::arg("n"), py::arg("m"), py::arg("capacities") = std::nullopt,
      py::arg("tol") = "1e-4");

  mod.def(
      "sample_profile",
      [](int n, int m, std::uint64_t seed, std::uint64_t index,
         const std::optional<std::vector<int>>& capacities) {
        Setting setting(n, m, capacities.value_or(std::vector<int>(static_cast<std::size_t>(m), 1)));
        TypeProfile profile = sample_profile(setting, seed, index);
        std::vector<std::vector<int>> out;
        for (const PrefOrder& t : profile.types) out.push_back(t.ranking());
        return out;
      },
      py::arg("n"), py::arg("m"), py::arg("seed"), py::arg("index"),
      py::arg("capacities") = std::nullopt);

  mod.def(
      "run_cube",
      [](int n, int m, bool exhaustive, std::int64_t profiles, std::uint64_t seed,
         const std::optional<std::vector<int>>& capacities, int threads) {
        SimConfig config;
        config.setting =
            Setting(n, m, capacities.value_or(std::vector<int>(static_cast<std::size_t>(m), 1)));
        config.mode = exhaustive ? ProfileMode::Exhaustive : ProfileMode::Sampled;
        config.profiles = profiles;
        config.seed = seed;
        config.threads = threads;
        CubeResult result = run_cube(config);
        py::list rows;
        for (const CubeRow& row : result.rows) {
          if (row.count == 0) continue;
          py::dict r;
          r["n"] = row.n;
          r["rel_nbm_abm"] = dom_relation_code(row.nbm_abm);
          r["rel_nbm_rsd"] = dom_relation_code(row.nbm_rsd);
          r["rel_abm_rsd"] = dom_relation_code(row.abm_rsd);
          r["count"] = row.count;
          rows.append(std::move(r));
        }
        py::dict out;
        out["rows"] = std::move(rows);
        out["profiles_processed"] = result.profiles_processed;
        out["exact"] = result.exact;
        return out;
      },
      py::arg("n"), py::arg("m"), py::arg("exhaustive") = false, py::arg("profiles") = 0,
      py::arg("seed") = 0, py::arg("capacities") = std::nullopt, py::arg("threads") = 1,
      "Pairwise rank-dominance tallies for NBM/ABM/RSD (zero-count rows omitted)");

  mod.def(
      "verify_nbm_never_dominated",
      [](int n, int m, const std::optional<std::vector<int>>& capacities) {
        Setting setting(n, m, capacities.value_or(std::vector<int>(static_cast<std::size_t>(m), 1)));
        VerifyReport report = verify_nbm_never_dominated(setting);
        return py::make_tuple(report.checked, report.violations);
      },
      py::arg("n"), py::arg("m"), py::arg("capacities") = std::nullopt,
      "(profiles_checked, violations): RSD strictly rank dominating NBM");

  mod.def(
      "verify_rsd_vs_abm",
      [](int n, int m, std::int64_t samples, std::uint64_t seed,
         const std::optional<std::vector<int>>& capacities) {
        Setting setting(n, m, capacities.value_or(std::vector<int>(static_cast<std::size_t>(m), 1)));
        SimConfig config;
        config.profiles = samples;
        config.seed = seed;
        if (samples > 0) config.mode = ProfileMode::Sampled;
        VerifyReport report = verify_rsd_vs_abm(setting, config);
        return py::make_tuple(report.checked, report.violations);
      },
      py::arg("n"), py::arg("m"), py::arg("samples") = 0, py::arg("seed") = 0,
      py::arg("capacities") = std::nullopt);

  mod.def(
      "estimate_fcm_probability",
      [](int n, int m, std::int64_t samples, std::uint64_t seed) {
        Setting setting = Setting::unit(n, m);
        FcmEstimate est = estimate_fcm_probability(setting, samples, seed);
        return py::make_tuple(est.fraction, est.stderr_);
      },
      py::arg("n"), py::arg("m"), py::arg("samples"), py::arg("seed") = 0,
      "(fraction, stderr): share of sampled profiles where RSD maximizes first choices");

  mod.def(
      "parse_profile",
      [](const std::string& text) {
        NamedProfile named = parse_profile_auto(text);
        std::vector<std::vector<int>> rankings;
        for (const PrefOrder& t : named.profile.types) rankings.push_back(t.ranking());
        py::dict out;
        out["objects"] = named.objects;
        out["capacities"] = named.setting.capacities;
        out["rankings"] = rankings;
        return out;
      },
      py::arg("text"), "Parse a JSON or a>b>c profile into index form");
}
