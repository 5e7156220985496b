#pragma once

#include <cstdint>
#include <random>

namespace dss {

struct RngConfig {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Seeded mt19937_64 wrapper. Identical (seed, stream) gives an identical draw
// sequence on a given platform; distinct streams are for concurrent chains.
class Rng {
 public:
  explicit Rng(RngConfig cfg) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                      static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(cfg.stream),
                      static_cast<std::uint32_t>(cfg.stream >> 32)};
    gen_.seed(seq);
  }

  double uniform() { return unif_(gen_); }
  double normal() { return norm_(gen_); }
  double gamma(double shape, double scale) {
    return std::gamma_distribution<double>(shape, scale)(gen_);
  }
  // X ~ InvGamma(shape, rate): 1/X ~ Gamma(shape, 1/rate)
  double inverse_gamma(double shape, double rate) {
    return 1.0 / gamma(shape, 1.0 / rate);
  }
  double chisq(double df) { return gamma(0.5 * df, 2.0); }
  std::uint64_t integer() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace dss
