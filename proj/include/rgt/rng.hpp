#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace rgt {

// splitmix64 finalizer (Steele, Lea & Flood 2014). Full avalanche on 64 bits.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of session `session` of policy `policy`:
//   splitmix64(splitmix64(splitmix64(base) ^ policy) ^ session)
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t policy,
                                 std::uint64_t session) noexcept {
  return splitmix64(splitmix64(splitmix64(base) ^ policy) ^ session);
}

// Source of randomness consumed by the wheel and the agents. Tests substitute
// scripted implementations to force outcomes.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  // Uniform on [0, 1).
  virtual double uniform01() = 0;
  // Uniform on {0, ..., n-1}; n >= 1.
  virtual std::size_t uniform_index(std::size_t n) = 0;
  // Draw from Beta(a, b); a, b > 0.
  virtual double beta(double a, double b) = 0;
};

// 64-bit Mersenne Twister behind the RandomSource interface. Sequences are a
// pure function of the seed for a given standard library.
class Mt64Source final : public RandomSource {
 public:
  explicit Mt64Source(std::uint64_t seed) : engine_(seed) {}

  double uniform01() override {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::size_t uniform_index(std::size_t n) override {
    if (n <= 1) return 0;
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  double beta(double a, double b) override {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    // Both draws can underflow to zero for very small shape parameters.
    for (;;) {
      const double x = ga(engine_);
      const double y = gb(engine_);
      if (x + y > 0.0) return x / (x + y);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rgt
