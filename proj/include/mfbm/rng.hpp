#ifndef MFBM_RNG_HPP
#define MFBM_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace mfbm {

// Philox4x32-10 counter-based generator.  A stream is keyed by (seed, stream
// id); paths draw from independent substreams (path index as stream id), so
// parallel generation stays deterministic and replayable.
class Philox4x32 {
 public:
  Philox4x32(std::uint64_t seed, std::uint64_t stream) : idx_(4) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
    ctr_[0] = 0;
    ctr_[1] = 0;
    ctr_[2] = static_cast<std::uint32_t>(stream);
    ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
  }

  std::uint32_t next_u32() {
    if (idx_ == 4) {
      out_ = block(ctr_, key_);
      // increment the 64-bit counter lanes
      if (++ctr_[0] == 0) ++ctr_[1];
      idx_ = 0;
    }
    return out_[idx_++];
  }

  // uniform on (0,1): (x + 1/2) / 2^32, never hits an endpoint
  double uniform() {
    return (static_cast<double>(next_u32()) + 0.5) * 0x1p-32;
  }

  // standard normal by Box-Muller; draws two uniforms per pair
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> c,
                                            std::array<std::uint32_t, 2> k) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
      k[0] += W0;
      k[1] += W1;
    }
    return c;
  }

  std::array<std::uint32_t, 4> ctr_{};
  std::array<std::uint32_t, 4> out_{};
  std::array<std::uint32_t, 2> key_{};
  int idx_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mfbm

#endif
