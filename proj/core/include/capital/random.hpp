#pragma once

#include <array>
#include <cstdint>

namespace capital {

// Philox4x32-10 block function (Salmon et al., SC'11). Counter-based: the
// output depends only on (key, counter), so independent substreams are
// addressed rather than advanced.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// What a substream is used for. Part of the counter, so changing the
// numbering changes every stream; bump kRandomStreamVersion if you do.
enum class StreamPurpose : std::uint32_t {
  kEnvironment = 1,
  kPolicy = 2,
  kExploration = 3,
  kEstimator = 4,
  kBootstrap = 5,
  kTest = 6,
};

inline constexpr const char* kRandomStreamName = "philox4x32-10/capital-v1";

// Address of one substream: (master seed) x (episode, entity, t, purpose).
// Layout of the 128-bit counter:
//   word0 = block index within the substream
//   word1 = entity (unit id or partition id)
//   word2 = t (low 32 bits)
//   word3 = purpose << 24 | episode (low 24 bits)
// The 64-bit master seed is the Philox key.
struct StreamAddress {
  std::uint64_t seed{0};
  std::uint32_t episode{0};
  std::uint32_t entity{0};
  std::uint32_t t{0};
  StreamPurpose purpose{StreamPurpose::kTest};
};

class RandomStream {
 public:
  explicit RandomStream(StreamAddress address);
  RandomStream(std::uint64_t seed, StreamPurpose purpose, std::uint32_t entity = 0,
               std::uint32_t t = 0, std::uint32_t episode = 0)
      : RandomStream(StreamAddress{seed, episode, entity, t, purpose}) {}

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double next_unit();
  // Uniform index in [0, n); n > 0. Multiply-high reduction.
  std::uint64_t next_index(std::uint64_t n);

  const StreamAddress& address() const { return address_; }

 private:
  void refill();

  StreamAddress address_;
  PhiloxKey key_{};
  std::uint32_t block_{0};
  PhiloxCounter buffer_{};
  int used_{4};
};

// Binomial(n, p) variate by inversion over a fixed mode-outward ordering of
// the support; O(sqrt(n p (1-p))) expected work.
std::uint64_t sample_binomial(RandomStream& rng, std::uint64_t n, double p);

}  // namespace capital
