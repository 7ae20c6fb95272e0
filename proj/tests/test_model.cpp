#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "matchlab/mechanisms.hpp"
#include "matchlab/dominance.hpp"
#include "matchlab/model.hpp"
#include "matchlab/profile_io.hpp"
#include "matchlab/rng.hpp"

using namespace matchlab;

namespace {

TypeProfile prof(std::vector<std::vector<int>> rankings) {
  TypeProfile p;
  for (auto& r : rankings) p.types.emplace_back(std::move(r));
  return p;
}

// All m! rankings of {0..m-1} in lexicographic order.
std::vector<std::vector<int>> all_rankings(int m) {
  std::vector<int> base(static_cast<std::size_t>(m));
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

}  // namespace

TEST_CASE("rank and choice lookups") {
  PrefOrder t({0, 1, 2});  // a > b > c
  CHECK(t.choice_at(1) == 0);
  CHECK(t.rank_of(2) == 3);
  CHECK_THROWS_AS(t.choice_at(0), InputError);
  CHECK_THROWS_AS(t.choice_at(4), InputError);
  CHECK_THROWS_AS(t.rank_of(3), InputError);
}

TEST_CASE("rank_of and choice_at are mutually inverse for every order up to m=5") {
  for (int m = 1; m <= 5; ++m) {
    for (const auto& ranking : all_rankings(m)) {
      PrefOrder t(ranking);
      for (int k = 1; k <= m; ++k) CHECK(t.rank_of(t.choice_at(k)) == k);
      for (int j = 0; j < m; ++j) CHECK(t.choice_at(t.rank_of(j)) == j);
    }
  }
}

TEST_CASE("neighbor swaps") {
  PrefOrder t({0, 1, 2});
  CHECK(neighbor_swap(t, 1).ranking() == std::vector<int>{1, 0, 2});
  CHECK(neighbor_swap(t, 2).ranking() == std::vector<int>{0, 2, 1});
  CHECK_THROWS_AS(neighbor_swap(t, 0), InputError);
  CHECK_THROWS_AS(neighbor_swap(t, 3), InputError);
  for (const auto& ranking : all_rankings(4)) {
    PrefOrder u(ranking);
    for (int k = 1; k <= 3; ++k) CHECK(neighbor_swap(neighbor_swap(u, k), k) == u);
  }
}

TEST_CASE("contour sets partition the object set") {
  PrefOrder t({0, 1, 2});
  ContourSets cs = contour_sets(t, 1);
  CHECK(cs.upper == std::vector<int>{0});
  CHECK(cs.lower == std::vector<int>{2});
  ContourSets top = contour_sets(t, 0);
  CHECK(top.upper.empty());
  CHECK(top.lower == std::vector<int>{1, 2});

  for (int m = 1; m <= 5; ++m) {
    for (const auto& ranking : all_rankings(m)) {
      PrefOrder u(ranking);
      for (int j = 0; j < m; ++j) {
        ContourSets sets = contour_sets(u, j);
        std::vector<bool> seen(static_cast<std::size_t>(m), false);
        for (int x : sets.upper) {
          CHECK(u.rank_of(x) < u.rank_of(j));
          seen[static_cast<std::size_t>(x)] = true;
        }
        for (int x : sets.lower) {
          CHECK(u.rank_of(x) > u.rank_of(j));
          seen[static_cast<std::size_t>(x)] = true;
        }
        seen[static_cast<std::size_t>(j)] = true;
        CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
      }
    }
  }
}

TEST_CASE("setting and profile validation") {
  CHECK_THROWS_AS(Setting(4, 3, {1, 1, 1}), InputError);  // demand exceeds supply
  CHECK_THROWS_AS(Setting(1, 2, {1, 0}), InputError);
  CHECK_THROWS_AS(Setting(0, 1, {1}), InputError);
  CHECK_NOTHROW(Setting(4, 3, {2, 1, 1}));

  CHECK_THROWS_AS(PrefOrder({0, 0, 1}), InputError);
  CHECK_THROWS_AS(PrefOrder({0, 3, 1}), InputError);

  Setting s = Setting::unit(2, 2);
  CHECK_THROWS_AS(validate_profile(s, prof({{0, 1}})), InputError);
  CHECK_THROWS_AS(validate_profile(s, prof({{0, 1}, {0, 1}, {1, 0}})), InputError);
  CHECK_NOTHROW(validate_profile(s, prof({{0, 1}, {1, 0}})));
}

TEST_CASE("allocation validator accepts mechanism output and rejects broken matrices") {
  Setting s = Setting::unit(3, 3);
  TypeProfile t = prof({{0, 1, 2}, {0, 1, 2}, {1, 0, 2}});
  Allocation x = exact_allocation(Mechanism::RSD, s, t);
  CHECK_NOTHROW(validate_allocation(x, s, /*require_factorial_denominator=*/true));

  Allocation bad_row(3, 3);
  bad_row.at(0, 0) = Rational(1, 2);  // row sums to 1/2
  bad_row.at(1, 1) = 1;
  bad_row.at(2, 2) = 1;
  CHECK_THROWS_AS(validate_allocation(bad_row, s), InputError);

  Allocation over_cap(3, 3);
  for (int i = 0; i < 3; ++i) over_cap.at(i, 0) = 1;  // column sum 3 > 1
  CHECK_THROWS_AS(validate_allocation(over_cap, s), InputError);

  Allocation bad_den(3, 3);  // valid matrix, but 5 does not divide 3!
  bad_den.at(0, 0) = Rational(1, 5);
  bad_den.at(0, 1) = Rational(4, 5);
  bad_den.at(1, 0) = Rational(4, 5);
  bad_den.at(1, 2) = Rational(1, 5);
  bad_den.at(2, 1) = Rational(1, 5);
  bad_den.at(2, 2) = Rational(4, 5);
  CHECK_NOTHROW(validate_allocation(bad_den, s));
  CHECK_THROWS_AS(validate_allocation(bad_den, s, true), InputError);
}

TEST_CASE("profile files round-trip for every order up to m=6") {
  for (int m = 1; m <= 6; ++m) {
    auto rankings = all_rankings(m);
    NamedProfile named;
    for (int j = 0; j < m; ++j) named.objects.push_back(std::string(1, static_cast<char>('a' + j)));
    named.setting = Setting(static_cast<int>(rankings.size()), m,
                            std::vector<int>(static_cast<std::size_t>(m),
                                             static_cast<int>(rankings.size())));
    named.profile = prof(rankings);

    NamedProfile from_json = parse_profile_json(format_profile_json(named));
    CHECK(from_json.objects == named.objects);
    CHECK(from_json.profile.types == named.profile.types);

    // The text form carries unit capacities, so it hosts at most m agents.
    NamedProfile small;
    small.objects = named.objects;
    small.setting = Setting::unit(m, m);
    small.profile.types.assign(named.profile.types.begin(), named.profile.types.begin() + m);
    NamedProfile from_text = parse_profile_text(format_profile_text(small));
    CHECK(from_text.profile.types == small.profile.types);
  }
}

TEST_CASE("profile parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_profile_json("{"), InputError);
  CHECK_THROWS_AS(parse_profile_json(R"({"agents": []})"), InputError);
  // truncated ranking
  CHECK_THROWS_AS(parse_profile_json(R"({"objects":["a","b"],"agents":[["a"]]})"), InputError);
  // duplicate entry
  CHECK_THROWS_AS(parse_profile_json(R"({"objects":["a","b"],"agents":[["a","a"]]})"), InputError);
  // unknown label
  CHECK_THROWS_AS(parse_profile_text("a>b\nc>a\n"), InputError);
  // capacity list mismatch
  CHECK_THROWS_AS(
      parse_profile_json(R"({"objects":["a","b"],"capacities":[1],"agents":[["a","b"]]})"),
      InputError);
}

TEST_CASE("rational literals round-trip") {
  CHECK(rational_to_string(Rational(3, 4)) == "3/4");
  CHECK(rational_to_string(Rational(2)) == "2");
  CHECK(rational_from_string("3/4") == Rational(3, 4));
  CHECK(rational_from_string("0.005") == Rational(1, 200));
  CHECK(rational_from_string("1e-4") == Rational(1, 10000));
  CHECK(rational_from_string("-2.5") == Rational(-5, 2));
  CHECK_THROWS_AS(rational_from_string("abc"), InputError);
  CHECK_THROWS_AS(rational_from_string("1/0"), InputError);
  CounterRng rng(5, 0);
  for (int i = 0; i < 200; ++i) {
    Rational r(static_cast<long long>(rng.bounded(20001)) - 10000,
               static_cast<long long>(rng.bounded(999)) + 1);
    CHECK(rational_from_string(rational_to_string(r)) == r);
  }
}

TEST_CASE("utility construction and consistency") {
  PrefOrder t({2, 0, 1});  // c > a > b
  UtilityFn u = UtilityFn::from_rank_values(t, {Rational(9), Rational(3), Rational(1)});
  CHECK(u.values == std::vector<Rational>{Rational(3), Rational(1), Rational(9)});
  CHECK(u.consistent_with(t));
  CHECK_FALSE(u.consistent_with(PrefOrder({0, 1, 2})));
  CHECK_THROWS_AS(UtilityFn::from_rank_values(t, {Rational(1), Rational(1), Rational(0)}),
                  InputError);
}

TEST_CASE("relabeling objects consistently preserves validity and rank distribution") {
  CounterRng rng(99, 0);
  for (int trial = 0; trial < 30; ++trial) {
    int m = 3 + static_cast<int>(rng.bounded(2));
    int n = m;
    Setting s = Setting::unit(n, m);
    TypeProfile t;
    std::vector<int> base(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i) {
      std::iota(base.begin(), base.end(), 0);
      rng.shuffle(std::span<int>(base));
      t.types.emplace_back(base);
    }
    Allocation x = exact_allocation(Mechanism::RSD, s, t);

    std::vector<int> sigma(static_cast<std::size_t>(m));
    std::iota(sigma.begin(), sigma.end(), 0);
    rng.shuffle(std::span<int>(sigma));

    TypeProfile relabeled;
    for (const PrefOrder& order : t.types) {
      std::vector<int> r;
      for (int k = 1; k <= m; ++k) r.push_back(sigma[static_cast<std::size_t>(order.choice_at(k))]);
      relabeled.types.emplace_back(std::move(r));
    }
    Allocation y(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) y.at(i, sigma[static_cast<std::size_t>(j)]) = x.at(i, j);

    CHECK_NOTHROW(validate_allocation(y, s, true));
    CHECK(rank_distribution(x, t).d == rank_distribution(y, relabeled).d);
  }
}
