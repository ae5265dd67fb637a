#pragma once

#include <cmath>
#include <cstdint>

namespace stasep::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace detail {

// Marsaglia-Tsang ziggurat tables for the exponential density, 256 layers.
template <int Bits>
struct ExpZiggurat {
  std::uint64_t ke[256];
  double we[256];
  double fe[256];

  ExpZiggurat() {
    const double m = std::ldexp(1.0, Bits);
    double de = 7.697117470131487, te = de;
    const double ve = 3.949659822581572e-3;
    const double q = ve / std::exp(-de);
    ke[0] = static_cast<std::uint64_t>((de / q) * m);
    ke[1] = 0;
    we[0] = q / m;
    we[255] = de / m;
    fe[0] = 1.0;
    fe[255] = std::exp(-de);
    for (int i = 254; i >= 1; --i) {
      de = -std::log(ve / de + std::exp(-de));
      ke[i + 1] = static_cast<std::uint64_t>((de / te) * m);
      te = de;
      fe[i] = std::exp(-de);
      we[i] = de / m;
    }
  }
};

inline const ExpZiggurat<53>& zigg53() {
  static const ExpZiggurat<53> z;
  return z;
}
inline const ExpZiggurat<32>& zigg32() {
  static const ExpZiggurat<32> z;
  return z;
}

}  // namespace detail

// xoshiro256++ with a per-replica state derived from (master_seed, stream_id)
// through splitmix64; reproducible regardless of thread scheduling.
class Stream {
 public:
  Stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t st = master_seed ^ (0x9E3779B97F4A7C15ull * (stream_id + 0x632BE59BD9B4E019ull));
    for (int i = 0; i < 4; ++i) s_[i] = splitmix64(st);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x1ull;
    z32_ = &detail::zigg32();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on [0,1)
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // uniform on (0,1]
  double u01_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  // unbiased-enough integer below n (multiply-shift; bias ~ n / 2^64)
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  double exponential();  // Exp(1), ziggurat

  // One 64-bit draw feeding both the exponential holding time (low 32 bits,
  // 32-bit ziggurat) and an index below n (high 32 bits, multiply-shift).
  void exp_and_below(std::uint32_t n, double& e, std::uint32_t& idx);

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
  const detail::ExpZiggurat<32>* z32_ = nullptr;
};

inline double Stream::exponential() {
  const detail::ExpZiggurat<53>& z = detail::zigg53();
  for (;;) {
    const std::uint64_t jz = next() >> 11;  // 53 bits
    const unsigned iz = static_cast<unsigned>(jz & 255);
    if (jz < z.ke[iz]) return static_cast<double>(jz) * z.we[iz];
    if (iz == 0) return 7.697117470131487 + exponential();  // tail: memoryless restart
    const double x = static_cast<double>(jz) * z.we[iz];
    if (z.fe[iz] + u01() * (z.fe[iz - 1] - z.fe[iz]) < std::exp(-x)) return x;
  }
}

inline void Stream::exp_and_below(std::uint32_t n, double& e, std::uint32_t& idx) {
  const detail::ExpZiggurat<32>& z = *z32_;
  const std::uint64_t u = next();
  idx = static_cast<std::uint32_t>((static_cast<std::uint64_t>(u >> 32) * n) >> 32);
  std::uint32_t jz = static_cast<std::uint32_t>(u);
  for (;;) {
    const unsigned iz = jz & 255;
    if (jz < z.ke[iz]) {
      e = static_cast<double>(jz) * z.we[iz];
      return;
    }
    if (iz == 0) {
      e = 7.697117470131487 + exponential();
      return;
    }
    const double x = static_cast<double>(jz) * z.we[iz];
    if (z.fe[iz] + u01() * (z.fe[iz - 1] - z.fe[iz]) < std::exp(-x)) {
      e = x;
      return;
    }
    jz = static_cast<std::uint32_t>(next());
  }
}

}  // namespace stasep::rng
