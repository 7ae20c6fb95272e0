// matchlab: one-sided matching mechanism laboratory.
//
// Subcommands: allocate, compare, simulate, verify, dosp, manip. Exact
// rationals are printed as "num/den" strings; sampled output uses floats
// plus standard errors. Errors go to stderr as JSON with a nonzero exit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matchlab/dominance.hpp"
#include "matchlab/incentives.hpp"
#include "matchlab/mechanisms.hpp"
#include "matchlab/profile_io.hpp"
#include "matchlab/simulate.hpp"
#include "matchlab/version.hpp"

using nlohmann::json;
using namespace matchlab;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MATCHLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw InputError("MATCHLAB_SEED must be an unsigned integer");
    }
  }
  return 0;
}

std::vector<std::string> generated_labels(int m) {
  std::vector<std::string> labels;
  for (int j = 0; j < m; ++j) {
    if (j < 26) labels.push_back(std::string(1, static_cast<char>('a' + j)));
    else labels.push_back("o" + std::to_string(j));
  }
  return labels;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> values;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      values.push_back(std::stoi(field));
    } catch (...) {
      throw InputError("invalid " + what + " entry '" + field + "'");
    }
  }
  if (values.empty()) throw InputError(what + " list is empty");
  return values;
}

Mechanism parse_mechanism(const std::string& name) {
  auto mech = mechanism_from_name(name);
  if (!mech)
    throw InputError("unknown mechanism '" + name +
                     "' (expected nbm, abm, rsd, sd, ps, nbm-plus or abm-plus)");
  return *mech;
}

Setting setting_from_flags(int n, int m, const std::string& caps_text) {
  if (n < 1 || m < 1) throw InputError("--n and --m must be positive");
  std::vector<int> caps(static_cast<std::size_t>(m), 1);
  if (!caps_text.empty()) {
    caps = parse_int_list(caps_text, "capacity");
    if (static_cast<int>(caps.size()) != m)
      throw InputError("--caps must list one capacity per object");
  }
  return Setting(n, m, std::move(caps));
}

PriorityOrdering parse_ordering(const std::string& text, int n) {
  std::vector<int> order = parse_int_list(text, "ordering");
  if (static_cast<int>(order.size()) != n)
    throw InputError("--ordering must list all " + std::to_string(n) + " agents");
  for (int& a : order) a -= 1;  // 1-based on the command line
  return PriorityOrdering(std::move(order));
}

json rational_matrix_json(const Allocation& x) {
  json rows = json::array();
  for (int i = 0; i < x.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < x.m(); ++j) row.push_back(rational_to_string(x.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json profile_json(const TypeProfile& profile, const std::vector<std::string>& labels) {
  json agents = json::array();
  for (const PrefOrder& t : profile.types) {
    json row = json::array();
    for (int k = 1; k <= t.m(); ++k) row.push_back(labels[static_cast<std::size_t>(t.choice_at(k))]);
    agents.push_back(std::move(row));
  }
  return agents;
}

json ranking_json(const PrefOrder& t, const std::vector<std::string>& labels) {
  json row = json::array();
  for (int k = 1; k <= t.m(); ++k) row.push_back(labels[static_cast<std::size_t>(t.choice_at(k))]);
  return row;
}

json rational_vector_json(const std::vector<Rational>& values) {
  json out = json::array();
  for (const Rational& v : values) out.push_back(rational_to_string(v));
  return out;
}

int run_allocate(const std::string& mech_name, const std::string& profile_path,
                 const std::string& ordering_text, bool exact, std::int64_t samples,
                 std::optional<std::uint64_t> seed, bool csv) {
  Mechanism mech = parse_mechanism(mech_name);
  NamedProfile named = load_profile_file(profile_path);
  std::optional<PriorityOrdering> pi;
  if (!ordering_text.empty()) pi = parse_ordering(ordering_text, named.setting.n);

  if (!exact && samples > 0) {
    if (pi) throw InputError("--ordering and --samples are mutually exclusive");
    SampledAllocation sa =
        sampled_allocation(mech, named.setting, named.profile, samples, seed.value_or(default_seed()));
    if (csv) {
      for (int i = 0; i < sa.n; ++i) {
        for (int j = 0; j < sa.m; ++j) std::cout << (j ? "," : "") << sa.mean_at(i, j);
        std::cout << '\n';
      }
      return 0;
    }
    json out{{"mechanism", mech_name},   {"objects", named.objects}, {"exact", false},
             {"samples", sa.samples},    {"seed", sa.seed},          {"matrix", json::array()},
             {"stderr", json::array()}};
    for (int i = 0; i < sa.n; ++i) {
      json mean_row = json::array(), se_row = json::array();
      for (int j = 0; j < sa.m; ++j) {
        mean_row.push_back(sa.mean_at(i, j));
        se_row.push_back(sa.stderr_at(i, j));
      }
      out["matrix"].push_back(std::move(mean_row));
      out["stderr"].push_back(std::move(se_row));
    }
    std::cout << out.dump(2) << '\n';
    return 0;
  }

  Allocation x = allocate(mech, named.setting, named.profile, pi);
  validate_allocation(x, named.setting);
  if (csv) {
    for (int i = 0; i < x.n(); ++i) {
      for (int j = 0; j < x.m(); ++j)
        std::cout << (j ? "," : "") << rational_to_string(x.at(i, j));
      std::cout << '\n';
    }
    return 0;
  }
  json out{{"mechanism", mech_name},
           {"objects", named.objects},
           {"exact", true},
           {"matrix", rational_matrix_json(x)}};
  if (pi) {
    json order = json::array();
    for (int a : pi->order) order.push_back(a + 1);
    out["ordering"] = std::move(order);
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_compare(const std::string& mechs_text, const std::string& profile_path,
                const std::string& relation) {
  auto comma = mechs_text.find(',');
  if (comma == std::string::npos) throw InputError("--mechs needs two names, e.g. nbm,abm");
  Mechanism left = parse_mechanism(mechs_text.substr(0, comma));
  Mechanism right = parse_mechanism(mechs_text.substr(comma + 1));
  if (relation != "rank" && relation != "ordinal")
    throw InputError("--relation must be rank or ordinal");

  NamedProfile named = load_profile_file(profile_path);
  Allocation x = allocate(left, named.setting, named.profile);
  Allocation y = allocate(right, named.setting, named.profile);

  json out{{"left", mechanism_name(left)},
           {"right", mechanism_name(right)},
           {"relation_kind", relation}};
  if (relation == "rank") {
    RankDistribution dx = rank_distribution(x, named.profile);
    RankDistribution dy = rank_distribution(y, named.profile);
    out["relation"] = dom_relation_code(rank_distribution_compare(dx, dy));
    out["rank_dist_left"] = rational_vector_json(dx.d);
    out["rank_dist_right"] = rational_vector_json(dy.d);
  } else {
    out["relation"] = dom_relation_code(ordinal_compare(x, y, named.profile));
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_simulate(int n, int m, const std::string& caps_text, std::int64_t profiles,
                 std::optional<std::uint64_t> seed, bool exhaustive, std::int64_t sample_orderings,
                 const std::string& out_path, int threads) {
  SimConfig config;
  config.setting = setting_from_flags(n, m, caps_text);
  config.mode = exhaustive ? ProfileMode::Exhaustive : ProfileMode::Sampled;
  config.profiles = profiles;
  config.seed = seed.value_or(default_seed());
  config.ordering_samples = sample_orderings;
  config.threads = threads;

  CubeResult result = run_cube(config);
  {
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write to '" + out_path + "'");
    write_cube_csv(result, out);
  }
  {
    std::ofstream meta(out_path + ".meta.json");
    if (!meta) throw InputError("cannot write to '" + out_path + ".meta.json'");
    meta << cube_sidecar_json(result) << '\n';
  }
  json summary{{"profiles_processed", result.profiles_processed},
               {"exact", result.exact},
               {"csv", out_path},
               {"sidecar", out_path + ".meta.json"}};
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int run_verify(const std::string& claim, int n, int m, const std::string& caps_text,
               std::int64_t samples, std::optional<std::uint64_t> seed, int threads) {
  Setting setting = setting_from_flags(n, m, caps_text);
  std::vector<std::string> labels = generated_labels(m);
  json out{{"claim", claim}};
  std::int64_t violations = 0;

  if (claim == "thm1" || claim == "rsd-vs-abm") {
    SimConfig config;
    config.setting = setting;
    config.profiles = samples;
    config.seed = seed.value_or(default_seed());
    config.threads = threads;
    if (samples > 0) config.mode = ProfileMode::Sampled;
    VerifyReport report =
        claim == "thm1" ? verify_nbm_never_dominated(setting, config) : verify_rsd_vs_abm(setting, config);
    violations = report.violations;
    out["checked"] = report.checked;
    out["violations"] = report.violations;
    json witnesses = json::array();
    for (const TypeProfile& w : report.witnesses) witnesses.push_back(profile_json(w, labels));
    out["witnesses"] = std::move(witnesses);
  } else if (claim.rfind("axiom:", 0) == 0) {
    std::string rest = claim.substr(6);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw InputError("axiom claim format is axiom:<name>:<mech>");
    auto axiom = axiom_from_name(rest.substr(0, colon));
    if (!axiom)
      throw InputError("unknown axiom '" + rest.substr(0, colon) +
                       "' (swap_monotonic, upper_invariant, lower_invariant)");
    Mechanism mech = parse_mechanism(rest.substr(colon + 1));
    CheckOptions opts;
    opts.threads = threads;
    if (seed) opts.seed = *seed;
    if (samples > 0) opts.samples = samples;
    AxiomReport report = check_axiom(mech, setting, *axiom, opts);
    violations = report.passed ? 0 : 1;
    out["mechanism"] = mechanism_name(mech);
    out["axiom"] = axiom_name(*axiom);
    out["passed"] = report.passed;
    out["exhaustive"] = report.exhaustive;
    out["profiles_checked"] = report.profiles_checked;
    if (report.counterexample) {
      const AxiomCounterexample& ce = *report.counterexample;
      out["counterexample"] = {{"profile", profile_json(ce.profile, labels)},
                               {"agent", ce.agent + 1},
                               {"swap_rank", ce.swap_rank},
                               {"before", rational_vector_json(ce.before)},
                               {"after", rational_vector_json(ce.after)}};
    }
  } else {
    throw InputError("unknown claim '" + claim + "' (thm1, rsd-vs-abm, axiom:<name>:<mech>)");
  }

  std::cout << out.dump(2) << '\n';
  return violations == 0 ? 0 : 1;
}

int run_dosp(const std::string& mech_name, int n, int m, const std::string& caps_text,
             const std::string& tol_text, int threads) {
  Mechanism mech = parse_mechanism(mech_name);
  Setting setting = setting_from_flags(n, m, caps_text);
  Rational tol = rational_from_string(tol_text);
  CheckOptions opts;
  opts.threads = threads;
  DospResult result = dosp(mech, setting, tol, opts);

  std::vector<std::string> labels = generated_labels(m);
  json out{{"mechanism", mech_name},
           {"n", n},
           {"m", m},
           {"capacities", setting.capacities},
           {"tol", tol_text},
           {"rho_lo", rational_to_string(result.lo)},
           {"rho_hi", rational_to_string(result.hi)},
           {"rho", to_double(result.midpoint())}};
  if (result.witness) {
    out["witness"] = {{"profile", profile_json(result.witness->profile, labels)},
                      {"agent", result.witness->agent + 1},
                      {"misreport", ranking_json(result.witness->misreport, labels)},
                      {"extreme_index", result.witness->extreme_index}};
  }
  if (result.failed_axiom) {
    json fa{{"axiom", axiom_name(result.failed_axiom->axiom)}};
    if (result.failed_axiom->counterexample) {
      const AxiomCounterexample& ce = *result.failed_axiom->counterexample;
      fa["counterexample"] = {{"profile", profile_json(ce.profile, labels)},
                              {"agent", ce.agent + 1},
                              {"swap_rank", ce.swap_rank},
                              {"before", rational_vector_json(ce.before)},
                              {"after", rational_vector_json(ce.after)}};
    }
    out["failed_axiom"] = std::move(fa);
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_manip(const std::string& mech_name, const std::string& profile_path,
              const std::string& utilities_path, int agent_flag, bool csv) {
  Mechanism mech = parse_mechanism(mech_name);
  NamedProfile named = load_profile_file(profile_path);
  std::vector<UtilityFn> utilities = load_utilities_file(utilities_path, named);
  std::optional<int> only_agent;
  if (agent_flag > 0) only_agent = agent_flag - 1;

  std::vector<MisreportGain> gains =
      misreport_gains(mech, named.setting, named.profile, utilities, only_agent);
  if (csv) {
    std::cout << "agent,misreport,gain,gain_float\n";
    for (const MisreportGain& g : gains) {
      std::cout << g.agent + 1 << ',';
      for (int k = 1; k <= g.misreport.m(); ++k) {
        if (k > 1) std::cout << '>';
        std::cout << named.objects[static_cast<std::size_t>(g.misreport.choice_at(k))];
      }
      std::cout << ',' << rational_to_string(g.gain) << ',' << to_double(g.gain) << '\n';
    }
    return 0;
  }
  json rows = json::array();
  for (const MisreportGain& g : gains)
    rows.push_back({{"agent", g.agent + 1},
                    {"misreport", ranking_json(g.misreport, named.objects)},
                    {"gain", rational_to_string(g.gain)},
                    {"gain_float", to_double(g.gain)}});
  json out{{"mechanism", mech_name}, {"gains", std::move(rows)}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matchlab: exact allocations, dominance classification and incentive analysis "
               "for one-sided matching mechanisms"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for simulate/verify/dosp")
      ->capture_default_str();

  // allocate
  auto* allocate_cmd = app.add_subcommand("allocate", "compute an allocation matrix");
  std::string mech_name, profile_path, ordering_text;
  bool exact = false, csv = false;
  std::int64_t samples = 0;
  std::optional<std::uint64_t> seed;
  allocate_cmd->add_option("--mech", mech_name, "nbm|abm|rsd|sd|ps|nbm-plus|abm-plus")->required();
  allocate_cmd->add_option("--profile", profile_path, "profile file (JSON or a>b>c lines)")->required();
  allocate_cmd->add_option("--ordering", ordering_text, "fixed priority ordering, 1-based (sd/nbm/abm)");
  auto* exact_flag =
      allocate_cmd->add_flag("--exact", exact, "exact enumeration over all n! orderings (default)");
  allocate_cmd->add_option("--samples", samples, "Monte Carlo orderings instead of enumeration")
      ->excludes(exact_flag);
  allocate_cmd->add_option("--seed", seed, "RNG seed (default: MATCHLAB_SEED or 0)");
  bool json_out = false;
  allocate_cmd->add_flag("--json", json_out, "JSON output (default)");
  allocate_cmd->add_flag("--csv", csv, "CSV matrix output");

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "dominance relation between two mechanisms");
  std::string mechs_text, relation = "rank";
  std::string compare_profile;
  compare_cmd->add_option("--mechs", mechs_text, "two mechanism names, e.g. nbm,abm")->required();
  compare_cmd->add_option("--profile", compare_profile, "profile file")->required();
  compare_cmd->add_option("--relation", relation, "rank|ordinal")->capture_default_str();

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "tally pairwise rank dominance over profiles");
  int sim_n = 0, sim_m = 0;
  std::string sim_caps, sim_out = "cube.csv";
  std::int64_t sim_profiles = 0, sim_orderings = 0;
  bool exhaustive = false;
  std::optional<std::uint64_t> sim_seed;
  simulate_cmd->add_option("--n", sim_n, "agents")->required();
  simulate_cmd->add_option("--m", sim_m, "objects")->required();
  simulate_cmd->add_option("--caps", sim_caps, "capacities, comma separated (default all 1)");
  simulate_cmd->add_option("--profiles", sim_profiles, "sampled profile count");
  simulate_cmd->add_option("--seed", sim_seed, "RNG seed (default: MATCHLAB_SEED or 0)");
  simulate_cmd->add_flag("--exhaustive", exhaustive, "enumerate every type profile");
  simulate_cmd->add_option("--sample-orderings", sim_orderings,
                           "sample this many orderings per profile instead of all n!");
  simulate_cmd->add_option("--out", sim_out, "output CSV path")->capture_default_str();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check a dominance/axiom claim; exit 0 iff clean");
  std::string claim, verify_caps;
  int verify_n = 0, verify_m = 0;
  std::int64_t verify_samples = 0;
  std::optional<std::uint64_t> verify_seed;
  verify_cmd->add_option("--claim", claim, "thm1|rsd-vs-abm|axiom:<name>:<mech>")->required();
  verify_cmd->add_option("--n", verify_n, "agents")->required();
  verify_cmd->add_option("--m", verify_m, "objects")->required();
  verify_cmd->add_option("--caps", verify_caps, "capacities (default all 1)");
  verify_cmd->add_option("--samples", verify_samples, "sampled profiles (when not exhaustive)");
  verify_cmd->add_option("--seed", verify_seed, "RNG seed (default: MATCHLAB_SEED or 0)");

  // dosp
  auto* dosp_cmd = app.add_subcommand("dosp", "degree of strategyproofness of a mechanism");
  std::string dosp_mech = "abm", dosp_caps, dosp_tol = "1e-4";
  int dosp_n = 0, dosp_m = 0;
  dosp_cmd->add_option("--mech", dosp_mech, "mechanism")->capture_default_str();
  dosp_cmd->add_option("--n", dosp_n, "agents")->required();
  dosp_cmd->add_option("--m", dosp_m, "objects")->required();
  dosp_cmd->add_option("--caps", dosp_caps, "capacities (default all 1)");
  dosp_cmd->add_option("--tol", dosp_tol, "bracket width")->capture_default_str();

  // manip
  auto* manip_cmd = app.add_subcommand("manip", "gain table over all single-agent misreports");
  std::string manip_mech, manip_profile, manip_utilities;
  int manip_agent = 0;
  bool manip_csv = false;
  manip_cmd->add_option("--mech", manip_mech, "mechanism")->required();
  manip_cmd->add_option("--profile", manip_profile, "profile file")->required();
  manip_cmd->add_option("--utilities", manip_utilities, "utilities file (JSON)")->required();
  manip_cmd->add_option("--agent", manip_agent, "restrict to one agent (1-based)");
  manip_cmd->add_flag("--csv", manip_csv, "CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
    json err{{"error", {{"type", "usage_error"}, {"message", e.what()}}}};
    std::cerr << err.dump() << '\n';
    return 2;
  }

  try {
    if (*allocate_cmd)
      return run_allocate(mech_name, profile_path, ordering_text, exact || samples == 0, samples,
                          seed, csv);
    if (*compare_cmd) return run_compare(mechs_text, compare_profile, relation);
    if (*simulate_cmd)
      return run_simulate(sim_n, sim_m, sim_caps, sim_profiles, sim_seed, exhaustive, sim_orderings,
                          sim_out, threads);
    if (*verify_cmd)
      return run_verify(claim, verify_n, verify_m, verify_caps, verify_samples, verify_seed,
                        threads);
    if (*dosp_cmd) return run_dosp(dosp_mech, dosp_n, dosp_m, dosp_caps, dosp_tol, threads);
    if (*manip_cmd) return run_manip(manip_mech, manip_profile, manip_utilities, manip_agent,
                                     manip_csv);
  } catch (const Error& e) {
    json err{{"error", {{"type", e.kind()}, {"message", e.what()}}}};
    std::cerr << err.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    json err{{"error", {{"type", "internal_error"}, {"message", e.what()}}}};
    std::cerr << err.dump() << '\n';
    return 3;
  }
  return 2;
}
