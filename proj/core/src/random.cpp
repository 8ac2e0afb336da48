#include "capital/random.hpp"

#include <cmath>

#include "capital/distribution.hpp"

namespace capital {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53U;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57U;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9U;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85U;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32U);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

RandomStream::RandomStream(StreamAddress address) : address_(address) {
  key_ = {static_cast<std::uint32_t>(address.seed), static_cast<std::uint32_t>(address.seed >> 32U)};
}

void RandomStream::refill() {
  const PhiloxCounter counter = {
      block_++, address_.entity, address_.t,
      (static_cast<std::uint32_t>(address_.purpose) << 24U) | (address_.episode & 0xFFFFFFU)};
  buffer_ = philox4x32_10(counter, key_);
  used_ = 0;
}

std::uint64_t RandomStream::next_u64() {
  if (used_ >= 4) refill();
  const std::uint64_t hi = buffer_[used_];
  const std::uint64_t lo = buffer_[used_ + 1];
  used_ += 2;
  return (hi << 32U) | lo;
}

double RandomStream::next_unit() { return static_cast<double>(next_u64() >> 11U) * 0x1.0p-53; }

std::uint64_t RandomStream::next_index(std::uint64_t n) {
  const unsigned __int128 product = static_cast<unsigned __int128>(next_u64()) * n;
  return static_cast<std::uint64_t>(product >> 64U);
}

std::uint64_t sample_binomial(RandomStream& rng, std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const double q = 1.0 - p;
  const double nd = static_cast<double>(n);
  auto mode = static_cast<std::uint64_t>(std::floor((nd + 1.0) * p));
  if (mode > n) mode = n;
  const double md = static_cast<double>(mode);
  const double log_pmf_mode = std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) - std::lgamma(nd - md + 1.0) +
                              md * std::log(p) + (nd - md) * std::log(q);
  const double u = rng.next_unit();
  const double ratio_up = p / q;
  const double ratio_down = q / p;

  // Visit mode, mode+1, mode-1, mode+2, ... and invert the cumulative mass
  // in that order.
  double cumulative = std::exp(log_pmf_mode);
  if (u < cumulative) return mode;
  double pmf_up = cumulative;
  double pmf_down = cumulative;
  std::uint64_t up = mode;
  std::uint64_t down = mode;
  while (up < n || down > 0) {
    if (up < n) {
      pmf_up *= static_cast<double>(n - up) / static_cast<double>(up + 1) * ratio_up;
      ++up;
      cumulative += pmf_up;
      if (u < cumulative) return up;
    }
    if (down > 0) {
      pmf_down *= static_cast<double>(down) / static_cast<double>(n - down + 1) * ratio_down;
      --down;
      cumulative += pmf_down;
      if (u < cumulative) return down;
    }
    if ((up >= n || pmf_up < 1e-300) && (down == 0 || pmf_down < 1e-300)) break;
  }
  return mode;
}

namespace detail {

std::uint64_t scaled_threshold(const Rational& cumulative) {
  const BigInt scaled = (boost::multiprecision::numerator(cumulative) << 64) /
                        boost::multiprecision::denominator(cumulative);
  const BigInt max = (BigInt(1) << 64) - 1;
  if (scaled > max) return static_cast<std::uint64_t>(max);
  return static_cast<std::uint64_t>(scaled);
}

}  // namespace detail

}  // namespace capital
