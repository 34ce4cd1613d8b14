#pragma once

#include <cstdint>
#include <random>

#include <kz/types.hpp>

namespace kz {

// splitmix64 step, used to derive independent stream seeds from one root
// seed; the raw root could collide across nearby trial indices otherwise.
std::uint64_t mix_seed(std::uint64_t root, std::uint64_t stream);

// mt19937_64 with hand-rolled double conversions. std::*_distribution is
// implementation-defined, and byte-identical reruns across toolchains are
// part of the artifact contract, so the mapping from raw draws to doubles
// lives here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform on (0,1]
  double uniform();
  // uniform on [lo, hi)
  double uniform(double lo, double hi);
  // standard normal via Box-Muller
  double gaussian();
  // (g1 + i g2)/sqrt(2), unit-variance complex gaussian
  Complex complex_gaussian();
  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Haar-ish unit vector: normalised complex gaussian.
ComplexVector random_unit_vector(Rng& rng, int dim);

// Orthogonal projector of the given rank: QQ^* for Q with orthonormal
// columns obtained from a gaussian matrix.
ComplexOperator random_projector(Rng& rng, int dim, int rank);

// rows x cols partial isometry (orthonormal rows), rows <= cols.
ComplexOperator random_partial_isometry(Rng& rng, int rows, int cols);

}  // namespace kz
