#include <kz/measures.hpp>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include <kz/random.hpp>

namespace kz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

AtomLocation AtomLocation::rational(std::int64_t p, std::int64_t q) {
  if (q <= 0) throw std::invalid_argument("AtomLocation: denominator must be > 0");
  p = floor_mod(p, q);  // wrap into [0,1)
  const std::int64_t g = std::gcd(p, q);
  AtomLocation loc;
  loc.num = p / (g == 0 ? 1 : g);
  loc.den = q / (g == 0 ? 1 : g);
  loc.value = static_cast<double>(loc.num) / static_cast<double>(loc.den);
  return loc;
}

AtomLocation AtomLocation::real(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("AtomLocation: non-finite location");
  x -= std::floor(x);  // wrap into [0,1)
  AtomLocation loc;
  loc.value = x;
  return loc;
}

SpectralMeasure SpectralMeasure::atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("atomic measure needs at least one atom");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.weight > 0.0)) throw std::invalid_argument("atom weights must be positive");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("atom weights must sum to 1, got " + std::to_string(total));
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (std::abs(atoms[i].x.value - atoms[j].x.value) < 1e-15) {
        throw std::invalid_argument("atom locations must be pairwise distinct");
      }
    }
  }
  SpectralMeasure mu;
  mu.kind_ = MeasureKind::atomic;
  mu.atoms_ = std::move(atoms);
  return mu;
}

SpectralMeasure SpectralMeasure::lebesgue() {
  SpectralMeasure mu;
  mu.kind_ = MeasureKind::lebesgue;
  return mu;
}

SpectralMeasure SpectralMeasure::cantor(int depth) {
  // below ~30 factors the truncated product is visibly off at small n
  if (depth < 30) throw std::invalid_argument("cantor measure: depth must be >= 30");
  SpectralMeasure mu;
  mu.kind_ = MeasureKind::cantor;
  mu.depth_ = depth;
  return mu;
}

Complex SpectralMeasure::moment(std::int64_t n) const {
  switch (kind_) {
    case MeasureKind::lebesgue:
      return n == 0 ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
    case MeasureKind::cantor: {
      // mu_hat(n) = e^{-pi i n} prod_k cos(2 pi n / 3^k); the prefactor is
      // (-1)^n at integers and the product converges since 3^-k is summable
      double prod = (n % 2 == 0) ? 1.0 : -1.0;
      double scale = 1.0;
      for (int k = 1; k <= depth_; ++k) {
        scale /= 3.0;
        prod *= std::cos(kTwoPi * static_cast<double>(n) * scale);
      }
      return Complex(prod, 0.0);
    }
    case MeasureKind::atomic: {
      Complex sum(0.0, 0.0);
      for (const Atom& a : atoms_) {
        double phase;
        if (a.x.exact()) {
          // reduce n*p mod q first; the phase then never exceeds 2 pi
          const std::int64_t r =
              floor_mod(static_cast<std::int64_t>(
                            (static_cast<__int128>(n) * a.x.num) % a.x.den),
                        a.x.den);
          phase = -kTwoPi * static_cast<double>(r) / static_cast<double>(a.x.den);
        } else {
          phase = -kTwoPi * static_cast<double>(n) * a.x.value;
        }
        sum += a.weight * Complex(std::cos(phase), std::sin(phase));
      }
      return sum;
    }
  }
  throw std::logic_error("unreachable");
}

const std::vector<Atom>& SpectralMeasure::atoms() const {
  if (kind_ != MeasureKind::atomic) {
    throw std::logic_error("atoms() requires an atomic measure");
  }
  return atoms_;
}

int SpectralMeasure::cantor_depth() const {
  if (kind_ != MeasureKind::cantor) {
    throw std::logic_error("cantor_depth() requires the cantor measure");
  }
  return depth_;
}

SpectralMeasure random_atomic_measure(Rng& rng, int count) {
  if (count < 1) throw std::invalid_argument("random_atomic_measure: count < 1");
  std::vector<Atom> atoms(count);
  double total = 0.0;
  for (Atom& a : atoms) {
    a.x = AtomLocation::real(rng.uniform(0.0, 1.0));
    a.weight = 0.1 + rng.uniform(0.0, 1.0);  // floor keeps weights comparable
    total += a.weight;
  }
  for (Atom& a : atoms) a.weight /= total;
  return SpectralMeasure::atomic(std::move(atoms));
}

L2Embedding::L2Embedding(const SpectralMeasure& mu, int order) {
  if (mu.kind() != MeasureKind::atomic) {
    throw std::invalid_argument("L2Embedding requires an atomic measure");
  }
  if (order < 1) throw std::invalid_argument("L2Embedding: order < 1");
  const auto& atoms = mu.atoms();
  const int m = static_cast<int>(atoms.size());
  weights_.resize(m);
  exp_.resize(m, order);
  for (int j = 0; j < m; ++j) {
    weights_[j] = atoms[j].weight;
    for (int n = 0; n < order; ++n) {
      double phase;
      if (atoms[j].x.exact()) {
        const std::int64_t q = atoms[j].x.den;
        const std::int64_t r =
            ((static_cast<std::int64_t>(n) % q) * atoms[j].x.num) % q;
        phase = kTwoPi * static_cast<double>(r) / static_cast<double>(q);
      } else {
        phase = kTwoPi * static_cast<double>(n) * atoms[j].x.value;
      }
      exp_(j, n) = Complex(std::cos(phase), std::sin(phase));
    }
  }
}

ComplexVector L2Embedding::basis(int n) const {
  if (n < 0 || n >= order()) throw std::out_of_range("L2Embedding::basis index");
  return exp_.col(n);
}

Complex L2Embedding::inner_product(const ComplexVector& f,
                                   const ComplexVector& g) const {
  if (f.size() != dim() || g.size() != dim()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  Complex sum(0.0, 0.0);
  for (int j = 0; j < dim(); ++j) sum += weights_[j] * std::conj(f[j]) * g[j];
  return sum;
}

double L2Embedding::norm_sq(const ComplexVector& f) const {
  return inner_product(f, f).real();
}

double L2Embedding::norm(const ComplexVector& f) const {
  return std::sqrt(std::max(0.0, norm_sq(f)));
}

ComplexVector L2Embedding::unit_coordinates(const ComplexVector& f) const {
  if (f.size() != dim()) throw std::invalid_argument("unit_coordinates: dimension mismatch");
  ComplexVector out(dim());
  for (int j = 0; j < dim(); ++j) out[j] = std::sqrt(weights_[j]) * f[j];
  return out;
}

ComplexVector L2Embedding::unit_basis(int n) const {
  return unit_coordinates(basis(n));
}

Complex L2Embedding::gram(int s, int i) const {
  return inner_product(basis(s), basis(i));
}

}  // namespace kz
