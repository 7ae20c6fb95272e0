#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "matchlab/model.hpp"

namespace matchlab {

// A parsed profile file: object labels give meaning to the dense indices
// used everywhere else. Labels exist only at the I/O boundary.
struct NamedProfile {
  std::vector<std::string> objects;
  Setting setting;
  TypeProfile profile;
};

// JSON form:
//   {"objects": ["a","b","c"], "capacities": [1,1,1],
//    "agents": [["a","b","c"], ["a","c","b"]]}
// Each agent entry is a full strict ranking, most-preferred first.
// "capacities" is optional and defaults to all ones. Truncated or
// duplicated rankings are rejected.
NamedProfile parse_profile_json(const std::string& text);

// Compact text form, one agent per line: "a>b>c". Objects are the label set
// of the first line (every line must rank exactly that set); capacities are
// all one; columns are ordered by sorted label.
NamedProfile parse_profile_text(const std::string& text);

// Dispatches on content: leading '{' selects JSON.
NamedProfile parse_profile_auto(const std::string& text);
NamedProfile load_profile_file(const std::string& path);

std::string format_profile_json(const NamedProfile& p);
std::string format_profile_text(const NamedProfile& p);

// Utilities file:
//   {"indexing": "rank" | "object", "utilities": [[120,30,19,2,1,0], ...]}
// One row per agent. "rank" rows list the value of an agent's 1st..m-th
// choice and are mapped through that agent's ranking; "object" rows are
// already indexed by object column. Values may be numbers or "num/den"
// strings.
std::vector<UtilityFn> parse_utilities_json(const std::string& text, const NamedProfile& profile);
std::vector<UtilityFn> load_utilities_file(const std::string& path, const NamedProfile& profile);

}  // namespace matchlab
