#include "stein/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace stein {

void ColumnMoments::add(std::span<const double> row) {
  ++count_;
  const double inv = 1.0 / double(count_);
  for (std::size_t c = 0; c < mean_.size(); ++c) {
    const double delta = row[c] - mean_[c];
    mean_[c] += delta * inv;
    m2_[c] += delta * (row[c] - mean_[c]);
  }
}

void ColumnMoments::merge(const ColumnMoments& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = double(count_);
  const double nb = double(other.count_);
  const double n = na + nb;
  for (std::size_t c = 0; c < mean_.size(); ++c) {
    const double delta = other.mean_[c] - mean_[c];
    mean_[c] += delta * nb / n;
    m2_[c] += other.m2_[c] + delta * delta * na * nb / n;
  }
  count_ += other.count_;
}

double ColumnMoments::variance(std::size_t c) const {
  if (count_ < 2) return std::numeric_limits<double>::quiet_NaN();
  return m2_[c] / double(count_ - 1);
}

double ColumnMoments::stderr_of_mean(std::size_t c) const {
  if (count_ < 2) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(variance(c) / double(count_));
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

unsigned threads_from_env() {
  const char* env = std::getenv("STEIN_PRECISION_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v <= 0) return 0;
  return unsigned(v);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

ColumnMoments replicate(std::uint64_t reps, std::size_t columns, unsigned threads,
                        const std::function<void(std::uint64_t, std::span<double>)>& fn) {
  const std::size_t blocks = std::size_t((reps + kReplicationBlock - 1) / kReplicationBlock);
  std::vector<ColumnMoments> partial(blocks, ColumnMoments(columns));
  parallel_for(blocks, threads, [&](std::size_t b) {
    std::vector<double> row(columns);
    const std::uint64_t begin = std::uint64_t(b) * kReplicationBlock;
    const std::uint64_t end = std::min<std::uint64_t>(reps, begin + kReplicationBlock);
    for (std::uint64_t r = begin; r < end; ++r) {
      std::fill(row.begin(), row.end(), 0.0);
      fn(r, row);
      partial[b].add(row);
    }
  });
  ColumnMoments total(columns);
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace stein
