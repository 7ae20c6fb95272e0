#include "kernel.hpp"

#include <algorithm>
#include <future>
#include <numeric>

namespace matchlab::detail {

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

PermSpace::PermSpace(int m) : m_(m) {
  if (m < 1 || m > 12) throw InputError("permutation space supports 1..12 objects");
  count_ = static_cast<int>(factorial(m));
  choices_.resize(static_cast<std::size_t>(count_) * m_);
  ranks_.resize(static_cast<std::size_t>(count_) * m_);
  std::vector<std::uint8_t> perm(static_cast<std::size_t>(m_));
  std::iota(perm.begin(), perm.end(), std::uint8_t{0});
  int idx = 0;
  do {
    std::uint8_t* ch = choices_.data() + static_cast<std::size_t>(idx) * m_;
    std::uint8_t* rk = ranks_.data() + static_cast<std::size_t>(idx) * m_;
    for (int r = 0; r < m_; ++r) {
      ch[r] = perm[static_cast<std::size_t>(r)];
      rk[perm[static_cast<std::size_t>(r)]] = static_cast<std::uint8_t>(r);
    }
    ++idx;
  } while (std::next_permutation(perm.begin(), perm.end()));
}

int PermSpace::index_of(std::span<const int> ranking) const {
  if (static_cast<int>(ranking.size()) != m_) throw InputError("ranking length mismatch");
  // Lexicographic rank via Lehmer code.
  int idx = 0;
  for (int i = 0; i < m_; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < m_; ++j)
      if (ranking[static_cast<std::size_t>(j)] < ranking[static_cast<std::size_t>(i)]) ++smaller;
    idx += smaller * static_cast<int>(factorial(m_ - 1 - i));
  }
  return idx;
}

PrefOrder PermSpace::pref_order(int idx) const {
  const std::uint8_t* ch = choice(idx);
  std::vector<int> ranking(static_cast<std::size_t>(m_));
  for (int r = 0; r < m_; ++r) ranking[static_cast<std::size_t>(r)] = ch[r];
  return PrefOrder(std::move(ranking));
}

int PermSpace::neighbor(int idx, int k) const {
  if (k < 1 || k > m_ - 1) throw InputError("swap rank out of range");
  if (neighbors_.empty()) {
    neighbors_.resize(static_cast<std::size_t>(count_) * (m_ - 1));
    std::vector<int> swapped(static_cast<std::size_t>(m_));
    for (int p = 0; p < count_; ++p) {
      const std::uint8_t* ch = choice(p);
      for (int s = 1; s < m_; ++s) {
        for (int r = 0; r < m_; ++r) swapped[static_cast<std::size_t>(r)] = ch[r];
        std::swap(swapped[static_cast<std::size_t>(s - 1)], swapped[static_cast<std::size_t>(s)]);
        neighbors_[static_cast<std::size_t>(p) * (m_ - 1) + (s - 1)] = index_of(swapped);
      }
    }
  }
  return neighbors_[static_cast<std::size_t>(idx) * (m_ - 1) + (k - 1)];
}

std::optional<std::int64_t> ProfileEnum::space_size(int perm_count, int n, std::int64_t budget) {
  std::int64_t size = 1;
  for (int i = 0; i < n; ++i) {
    if (size > budget / perm_count) return std::nullopt;
    size *= perm_count;
  }
  if (size > budget) return std::nullopt;
  return size;
}

ProfileEnum::ProfileEnum(const PermSpace& perms, int n, std::int64_t budget)
    : perms_(perms), n_(n) {
  auto size = space_size(perms.count(), n, budget);
  if (!size)
    throw BudgetError("profile space (m!)^n exceeds the configured budget of " +
                      std::to_string(budget) + " profiles");
  count_ = *size;
  strides_.resize(static_cast<std::size_t>(n_));
  std::int64_t s = 1;
  for (int i = n_ - 1; i >= 0; --i) {
    strides_[static_cast<std::size_t>(i)] = s;
    s *= perms.count();
  }
}

void ProfileEnum::decode(std::int64_t idx, int* perm_idx_out) const {
  for (int i = n_ - 1; i >= 0; --i) {
    perm_idx_out[i] = static_cast<int>(idx % perms_.count());
    idx /= perms_.count();
  }
}

std::int64_t ProfileEnum::index(std::span<const int> perm_idx) const {
  std::int64_t idx = 0;
  for (int i = 0; i < n_; ++i) idx += strides_[static_cast<std::size_t>(i)] * perm_idx[static_cast<std::size_t>(i)];
  return idx;
}

TypeProfile ProfileEnum::profile_at(std::int64_t idx) const {
  std::vector<int> digits(static_cast<std::size_t>(n_));
  decode(idx, digits.data());
  TypeProfile profile;
  profile.types.reserve(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) profile.types.push_back(perms_.pref_order(digits[static_cast<std::size_t>(i)]));
  return profile;
}

DetRunner::DetRunner(const Setting& setting)
    : n_(setting.n),
      m_(setting.m),
      caps_(setting.capacities),
      choice_(static_cast<std::size_t>(setting.n), nullptr),
      rank_(static_cast<std::size_t>(setting.n), nullptr),
      remaining_(static_cast<std::size_t>(setting.m)),
      cursor_(static_cast<std::size_t>(setting.n)),
      target_(static_cast<std::size_t>(setting.n)) {}

void DetRunner::set_profile(const TypeProfile& profile) {
  rank_scratch_.resize(static_cast<std::size_t>(n_) * m_);
  choice_scratch_.resize(static_cast<std::size_t>(n_) * m_);
  for (int i = 0; i < n_; ++i) {
    std::uint8_t* ch = choice_scratch_.data() + static_cast<std::size_t>(i) * m_;
    std::uint8_t* rk = rank_scratch_.data() + static_cast<std::size_t>(i) * m_;
    const PrefOrder& t = profile.types[static_cast<std::size_t>(i)];
    for (int r = 0; r < m_; ++r) {
      ch[r] = static_cast<std::uint8_t>(t.ranking()[static_cast<std::size_t>(r)]);
      rk[ch[r]] = static_cast<std::uint8_t>(r);
    }
    set_agent(i, ch, rk);
  }
}

void DetRunner::run_sd(const int* pi, int* out) {
  std::copy(caps_.begin(), caps_.end(), remaining_.begin());
  for (int k = 0; k < n_; ++k) {
    int a = pi[k];
    const std::uint8_t* ch = choice_[static_cast<std::size_t>(a)];
    for (int r = 0; r < m_; ++r) {
      int j = ch[r];
      if (remaining_[static_cast<std::size_t>(j)] > 0) {
        --remaining_[static_cast<std::size_t>(j)];
        out[a] = j;
        break;
      }
    }
  }
}

void DetRunner::run_nbm(const int* pi, int* out) {
  std::copy(caps_.begin(), caps_.end(), remaining_.begin());
  std::fill(out, out + n_, -1);
  int assigned = 0;
  // Targets in round r are the reported r-th choices regardless of state,
  // so awarding in priority order implements the simultaneous round.
  for (int round = 0; round < m_ && assigned < n_; ++round) {
    for (int k = 0; k < n_; ++k) {
      int a = pi[k];
      if (out[a] >= 0) continue;
      int j = choice_[static_cast<std::size_t>(a)][round];
      if (remaining_[static_cast<std::size_t>(j)] > 0) {
        --remaining_[static_cast<std::size_t>(j)];
        out[a] = j;
        ++assigned;
      }
    }
  }
  // Supply covers demand, so m rounds always suffice.
  if (assigned < n_) throw Error("internal invariant violated: agent left unassigned");
}

void DetRunner::run_abm(const int* pi, int* out) {
  std::copy(caps_.begin(), caps_.end(), remaining_.begin());
  std::fill(out, out + n_, -1);
  std::fill(cursor_.begin(), cursor_.end(), 0);
  int assigned = 0;
  // A losing agent's target is always exhausted by the end of the round, so
  // cursors advance monotonically and never skip an object with capacity.
  // Each round assigns at least one agent.
  for (int round = 0; assigned < n_; ++round) {
    if (round > n_) throw Error("internal invariant violated: round made no progress");
    for (int a = 0; a < n_; ++a) {
      if (out[a] >= 0) continue;
      const std::uint8_t* ch = choice_[static_cast<std::size_t>(a)];
      int& cur = cursor_[static_cast<std::size_t>(a)];
      while (remaining_[ch[cur]] == 0) ++cur;
      target_[static_cast<std::size_t>(a)] = ch[cur];
    }
    for (int k = 0; k < n_; ++k) {
      int a = pi[k];
      if (out[a] >= 0) continue;
      int j = target_[static_cast<std::size_t>(a)];
      if (remaining_[static_cast<std::size_t>(j)] > 0) {
        --remaining_[static_cast<std::size_t>(j)];
        out[a] = j;
        ++assigned;
      }
    }
  }
}

void DetRunner::accumulate_rank_counts(const int* out, std::int64_t* rank_counts) const {
  for (int a = 0; a < n_; ++a) ++rank_counts[rank_[static_cast<std::size_t>(a)][out[a]]];
}

int DetRunner::first_choice_count(const int* out) const {
  int c = 0;
  for (int a = 0; a < n_; ++a)
    if (choice_[static_cast<std::size_t>(a)][0] == out[a]) ++c;
  return c;
}

void parallel_chunks(std::int64_t count, int threads,
                     const std::function<void(int, std::int64_t, std::int64_t)>& worker) {
  if (threads < 1) threads = 1;
  if (threads == 1 || count < 2) {
    worker(0, 0, count);
    return;
  }
  int chunks = threads;
  std::int64_t per = (count + chunks - 1) / chunks;
  std::vector<std::future<void>> futures;
  for (int c = 0; c < chunks; ++c) {
    std::int64_t begin = c * per;
    std::int64_t end = std::min(count, begin + per);
    if (begin >= end) break;
    futures.push_back(std::async(std::launch::async, [&worker, c, begin, end] { worker(c, begin, end); }));
  }
  for (auto& f : futures) f.get();
}

}  // namespace matchlab::detail
