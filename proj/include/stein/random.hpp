#pragma once

// Counter-based random numbers (Philox4x32-10).
//
// A draw is a pure function of (seed, stream_id, draw_index), so a
// replication that owns stream_id = r produces the same numbers no matter
// which thread runs it or in which order.

#include <array>
#include <cstdint>
#include <initializer_list>

namespace stein {

/// Immutable key of an independent random sequence.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  RngStream with_stream(std::uint64_t id) const { return {seed, id}; }
  friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Philox4x32 with 10 rounds; returns four 32-bit words for one counter value.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer, used to derive sub-seeds for separate purposes.
std::uint64_t mix64(std::uint64_t x);

/// Derives a seed for a named sub-experiment from a base seed and integer tags.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

/// Sequential reader over one RngStream. Cheap to construct; not thread-shared.
class CounterRng {
 public:
  explicit CounterRng(RngStream stream) : stream_(stream) {}

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Gamma(shape, 1) by Marsaglia-Tsang; shape > 0.
  double gamma(double shape);
  /// Central chi-square with k > 0 degrees of freedom.
  double chi2(double k) { return 2.0 * gamma(0.5 * k); }

  std::uint64_t draws_used() const { return index_; }
  const RngStream& stream() const { return stream_; }

 private:
  RngStream stream_;
  std::uint64_t index_ = 0;  // next 128-bit block
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace stein
