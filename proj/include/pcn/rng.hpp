#ifndef PCN_RNG_HPP_
#define PCN_RNG_HPP_

// Seeded standard-normal generator: std::mt19937_64 (its output sequence is
// fixed by the C++ standard) feeding a Box-Muller transform on 53-bit
// uniforms. Streams are derived from (seed, tags...) with splitmix64 so that
// independent experiment rows never share draws.

#include <cstdint>
#include <initializer_list>
#include <random>

#include "pcn/matrix.hpp"

namespace pcn {

inline constexpr const char* kRngAlgorithm = "mt19937_64/box-muller";

std::uint64_t splitmix64(std::uint64_t x);

// Folds each tag into the seed with splitmix64.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : engine_(seed) {}

  double normal();
  // Column-major fill.
  Matrix normal_matrix(Index rows, Index cols);
  Vector normal_vector(Index size);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pcn

#endif  // PCN_RNG_HPP_
