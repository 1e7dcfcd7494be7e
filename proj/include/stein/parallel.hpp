#pragma once

// Replication engine with a reduction order that does not depend on the
// number of worker threads: replications are grouped into fixed-size
// blocks, each block is folded in replication order, and blocks are merged
// in block order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace stein {

/// Per-column running mean and centered second moment (Chan et al. merge).
class ColumnMoments {
 public:
  explicit ColumnMoments(std::size_t columns = 0) : mean_(columns, 0.0), m2_(columns, 0.0) {}

  void add(std::span<const double> row);
  void merge(const ColumnMoments& other);

  std::size_t count() const { return count_; }
  std::size_t columns() const { return mean_.size(); }
  double mean(std::size_t c) const { return mean_[c]; }
  /// Sample variance; NaN when fewer than two rows.
  double variance(std::size_t c) const;
  /// Standard error of the mean; NaN when fewer than two rows.
  double stderr_of_mean(std::size_t c) const;

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

inline constexpr std::size_t kReplicationBlock = 2048;

/// Worker count: `requested` if nonzero, otherwise the hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Reads STEIN_PRECISION_THREADS; 0 if unset or malformed.
unsigned threads_from_env();

/// Calls fn(rep, row) for rep in [0, reps), where row has `columns` slots
/// (zero-initialized), and returns the column moments.
ColumnMoments replicate(std::uint64_t reps, std::size_t columns, unsigned threads,
                        const std::function<void(std::uint64_t, std::span<double>)>& fn);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace stein
