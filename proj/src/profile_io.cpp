#include "matchlab/profile_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace matchlab {

namespace {

using nlohmann::json;

NamedProfile assemble(std::vector<std::string> objects, std::vector<int> capacities,
                      const std::vector<std::vector<std::string>>& agent_rankings) {
  if (objects.empty()) throw InputError("profile declares no objects");
  std::map<std::string, int> index;
  for (int j = 0; j < static_cast<int>(objects.size()); ++j) {
    if (!index.emplace(objects[static_cast<std::size_t>(j)], j).second)
      throw InputError("duplicate object label '" + objects[static_cast<std::size_t>(j)] + "'");
  }
  if (agent_rankings.empty()) throw InputError("profile declares no agents");

  TypeProfile profile;
  for (const auto& row : agent_rankings) {
    if (row.size() != objects.size())
      throw InputError("each agent must rank all " + std::to_string(objects.size()) +
                       " objects (truncated lists are rejected)");
    std::vector<int> ranking;
    ranking.reserve(row.size());
    for (const std::string& label : row) {
      auto it = index.find(label);
      if (it == index.end()) throw InputError("unknown object label '" + label + "'");
      ranking.push_back(it->second);
    }
    profile.types.emplace_back(std::move(ranking));  // rejects duplicates
  }

  NamedProfile named;
  named.setting = Setting(static_cast<int>(agent_rankings.size()),
                          static_cast<int>(objects.size()), std::move(capacities));
  named.objects = std::move(objects);
  named.profile = std::move(profile);
  return named;
}

}  // namespace

NamedProfile parse_profile_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed profile JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("objects") || !j.contains("agents"))
    throw InputError("profile JSON needs \"objects\" and \"agents\" fields");

  std::vector<std::string> objects;
  for (const auto& o : j.at("objects")) {
    if (!o.is_string()) throw InputError("object labels must be strings");
    objects.push_back(o.get<std::string>());
  }
  std::vector<int> capacities(objects.size(), 1);
  if (j.contains("capacities")) {
    const auto& caps = j.at("capacities");
    if (!caps.is_array() || caps.size() != objects.size())
      throw InputError("\"capacities\" must list one integer per object");
    capacities.clear();
    for (const auto& c : caps) {
      if (!c.is_number_integer()) throw InputError("capacities must be integers");
      capacities.push_back(c.get<int>());
    }
  }
  std::vector<std::vector<std::string>> agents;
  for (const auto& row : j.at("agents")) {
    if (!row.is_array()) throw InputError("each agent entry must be a ranking array");
    std::vector<std::string> ranking;
    for (const auto& label : row) {
      if (!label.is_string()) throw InputError("rankings must contain object labels");
      ranking.push_back(label.get<std::string>());
    }
    agents.push_back(std::move(ranking));
  }
  return assemble(std::move(objects), std::move(capacities), agents);
}

NamedProfile parse_profile_text(const std::string& text) {
  std::vector<std::vector<std::string>> agents;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    // Trim and skip blanks/comments.
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> ranking;
    std::istringstream fields(line);
    std::string label;
    while (std::getline(fields, label, '>')) {
      auto b = label.find_first_not_of(" \t");
      auto e = label.find_last_not_of(" \t");
      if (b == std::string::npos) throw InputError("empty object label in '" + line + "'");
      ranking.push_back(label.substr(b, e - b + 1));
    }
    agents.push_back(std::move(ranking));
  }
  if (agents.empty()) throw InputError("no agent lines found");
  std::vector<std::string> objects = agents.front();
  std::sort(objects.begin(), objects.end());
  return assemble(std::move(objects), std::vector<int>(agents.front().size(), 1), agents);
}

NamedProfile parse_profile_auto(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_profile_json(text);
  return parse_profile_text(text);
}

NamedProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_profile_auto(buffer.str());
}

std::string format_profile_json(const NamedProfile& p) {
  json j;
  j["objects"] = p.objects;
  j["capacities"] = p.setting.capacities;
  json agents = json::array();
  for (const PrefOrder& t : p.profile.types) {
    json row = json::array();
    for (int r = 1; r <= t.m(); ++r)
      row.push_back(p.objects[static_cast<std::size_t>(t.choice_at(r))]);
    agents.push_back(std::move(row));
  }
  j["agents"] = std::move(agents);
  return j.dump(2);
}

std::string format_profile_text(const NamedProfile& p) {
  std::ostringstream out;
  for (const PrefOrder& t : p.profile.types) {
    for (int r = 1; r <= t.m(); ++r) {
      if (r > 1) out << '>';
      out << p.objects[static_cast<std::size_t>(t.choice_at(r))];
    }
    out << '\n';
  }
  return out.str();
}

std::vector<UtilityFn> parse_utilities_json(const std::string& text, const NamedProfile& profile) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed utilities JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("utilities"))
    throw InputError("utilities JSON needs a \"utilities\" field");
  std::string indexing = j.value("indexing", std::string("rank"));
  if (indexing != "rank" && indexing != "object")
    throw InputError("\"indexing\" must be \"rank\" or \"object\"");

  auto parse_value = [](const json& v) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_string()) return rational_from_string(v.get<std::string>());
    if (v.is_number_float()) return rational_from_string(std::to_string(v.get<double>()));
    throw InputError("utility values must be integers or rational strings");
  };

  const auto& rows = j.at("utilities");
  if (!rows.is_array() || rows.size() != profile.profile.types.size())
    throw InputError("need one utility row per agent");
  std::vector<UtilityFn> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != profile.setting.m)
      throw InputError("each utility row must list one value per object");
    std::vector<Rational> values;
    for (const auto& v : row) values.push_back(parse_value(v));
    if (indexing == "rank") {
      out.push_back(UtilityFn::from_rank_values(profile.profile.types[i], values));
    } else {
      UtilityFn u;
      u.values = std::move(values);
      if (!u.consistent_with(profile.profile.types[i]))
        throw InputError("utility row " + std::to_string(i) +
                         " is not consistent with the agent's ranking");
      out.push_back(std::move(u));
    }
  }
  return out;
}

std::vector<UtilityFn> load_utilities_file(const std::string& path, const NamedProfile& profile) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open utilities file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_utilities_json(buffer.str(), profile);
}

}  // namespace matchlab
