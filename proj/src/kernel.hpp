#pragma once

// Internal integer kernels: deterministic mechanism runs over raw rank
// tables, permutation spaces, and profile enumeration. Heavy loops
// (ordering enumeration, exhaustive profile scans) stay on plain integers;
// rationals only appear at the public API boundary.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "matchlab/errors.hpp"
#include "matchlab/model.hpp"

namespace matchlab::detail {

std::int64_t factorial(int n);

// All m! preference orders in lexicographic order, with O(1) access to both
// the choice vector (rank -> object) and the rank table (object -> rank).
class PermSpace {
 public:
  explicit PermSpace(int m);

  int m() const { return m_; }
  int count() const { return count_; }

  const std::uint8_t* choice(int idx) const { return choices_.data() + static_cast<std::size_t>(idx) * m_; }
  const std::uint8_t* rank(int idx) const { return ranks_.data() + static_cast<std::size_t>(idx) * m_; }

  // Lexicographic rank of a ranking; inverse of choice().
  int index_of(std::span<const int> ranking) const;
  int index_of(const PrefOrder& t) const { return index_of(t.ranking()); }

  PrefOrder pref_order(int idx) const;

  // neighbor(idx, k) = index of the order with 1-based ranks k and k+1
  // swapped; built lazily on first use.
  int neighbor(int idx, int k) const;

 private:
  int m_;
  int count_;
  std::vector<std::uint8_t> choices_;
  std::vector<std::uint8_t> ranks_;
  mutable std::vector<int> neighbors_;  // count_ * (m_-1), lazy
};

// Mixed-radix indexing of the (m!)^n profile space, agent 0 most
// significant. Only constructible when the space fits the budget.
class ProfileEnum {
 public:
  ProfileEnum(const PermSpace& perms, int n, std::int64_t budget);

  // nullopt when (m!)^n exceeds budget (avoids overflow too).
  static std::optional<std::int64_t> space_size(int perm_count, int n, std::int64_t budget);

  std::int64_t count() const { return count_; }
  int n() const { return n_; }
  std::int64_t stride(int agent) const { return strides_[agent]; }

  void decode(std::int64_t idx, int* perm_idx_out) const;
  std::int64_t index(std::span<const int> perm_idx) const;

  TypeProfile profile_at(std::int64_t idx) const;

 private:
  const PermSpace& perms_;
  int n_;
  std::int64_t count_;
  std::vector<std::int64_t> strides_;
};

// Deterministic mechanism runner bound to one setting. Reusable scratch, no
// per-run allocation. Agent preference pointers are set per profile.
class DetRunner {
 public:
  DetRunner(const Setting& setting);

  void set_agent(int i, const std::uint8_t* choice, const std::uint8_t* rank) {
    choice_[i] = choice;
    rank_[i] = rank;
  }
  void set_profile(const PermSpace& perms, const int* perm_idx) {
    for (int i = 0; i < n_; ++i) set_agent(i, perms.choice(perm_idx[i]), perms.rank(perm_idx[i]));
  }
  // Binds a PrefOrder-backed profile; the profile must outlive the runs.
  void set_profile(const TypeProfile& profile);

  int n() const { return n_; }
  int m() const { return m_; }

  // pi lists agents highest priority first; out receives one object per
  // agent.
  void run_sd(const int* pi, int* out);
  void run_nbm(const int* pi, int* out);
  void run_abm(const int* pi, int* out);

  // rank_counts[r] += number of agents whose assigned object has 0-based
  // rank r under their own type.
  void accumulate_rank_counts(const int* out, std::int64_t* rank_counts) const;

  int first_choice_count(const int* out) const;

 private:
  int n_;
  int m_;
  std::vector<int> caps_;
  std::vector<const std::uint8_t*> choice_;
  std::vector<const std::uint8_t*> rank_;
  std::vector<int> remaining_;
  std::vector<int> cursor_;
  std::vector<int> target_;
  std::vector<std::uint8_t> rank_scratch_;  // per-agent rank rows for PrefOrder profiles
  std::vector<std::uint8_t> choice_scratch_;
};

// Runs `body(pi)` for every permutation of {0..n-1} in lexicographic order.
template <typename Body>
void for_each_ordering(int n, Body&& body) {
  std::vector<int> pi(static_cast<std::size_t>(n));
  std::iota(pi.begin(), pi.end(), 0);
  do {
    body(pi.data());
  } while (std::next_permutation(pi.begin(), pi.end()));
}

// Chunked parallel map over [0, count): runs worker(chunk_index, begin,
// end) on `threads` async tasks. Chunk boundaries depend only on count and
// threads, so merging per-chunk results in chunk order is deterministic.
void parallel_chunks(std::int64_t count, int threads,
                     const std::function<void(int, std::int64_t, std::int64_t)>& worker);

}  // namespace matchlab::detail
