#include <kz/coefficients.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

#include <kz/io.hpp>

namespace kz {

namespace {

void check_lambda(double lambda, const char* who) {
  if (!(lambda > 0.0 && lambda < 2.0)) {
    throw std::invalid_argument(std::string(who) + ": lambda must lie in (0,2)");
  }
}

// Moments mu_hat(1..count-1) fetched once; the recursions below only ever
// consume positive lags.
std::vector<Complex> moment_row(const SpectralMeasure& mu, int count) {
  std::vector<Complex> m(count);
  for (int n = 0; n < count; ++n) m[n] = mu.moment(n);
  return m;
}

// Shared by aux_vectors and verify_appendix_b: the h recursion in embedding
// coordinates, kept free of any alpha input so the two routes to h stay
// independent. Gram values <e_n, e_k> come from the embedding inner product.
std::vector<ComplexVector> build_h_recursion(const L2Embedding& emb,
                                             double lambda, int count) {
  std::vector<Complex> gram(count);  // gram[d] = <e_d, e_0> = mu_hat(d)
  for (int d = 0; d < count; ++d) gram[d] = emb.gram(d, 0);
  std::vector<ComplexVector> h(count);
  for (int n = 0; n < count; ++n) {
    ComplexVector acc = emb.basis(n);
    for (int k = 0; k < n; ++k) acc -= std::conj(gram[n - k]) * h[k];
    h[n] = lambda * acc;
  }
  return h;
}

}  // namespace

CoeffTable alpha_recursive(const SpectralMeasure& mu, double lambda, int order) {
  check_lambda(lambda, "alpha_recursive");
  if (order < 1) throw std::invalid_argument("alpha_recursive: order < 1");
  const std::vector<Complex> m = moment_row(mu, order);
  CoeffTable t;
  t.lambda = lambda;
  t.source = AlphaSource::recursive;
  t.alpha.resize(order);
  t.alpha[0] = Complex(lambda, 0.0);
  for (int n = 1; n < order; ++n) {
    Complex conv(0.0, 0.0);
    for (int k = 0; k < n; ++k) conv += m[n - k] * t.alpha[k];
    t.alpha[n] = -lambda * conv;
  }
  return t;
}

CoeffTable alpha_combinatorial(const SpectralMeasure& mu, double lambda,
                               int order) {
  check_lambda(lambda, "alpha_combinatorial");
  if (order < 1) throw std::invalid_argument("alpha_combinatorial: order < 1");
  if (order - 1 > kMaxCompositionIndex) {
    throw std::invalid_argument(
        "alpha_combinatorial: composition enumeration capped at n = " +
        std::to_string(kMaxCompositionIndex));
  }
  const std::vector<Complex> m = moment_row(mu, order);
  CoeffTable t;
  t.lambda = lambda;
  t.source = AlphaSource::combinatorial;
  t.alpha.resize(order);
  t.alpha[0] = Complex(lambda, 0.0);

  // Depth-first over compositions in lexicographic order of their parts:
  // first part smallest first, then recurse on the remainder.
  for (int n = 1; n < order; ++n) {
    Complex total(0.0, 0.0);
    // sign/power bookkeeping: a composition of length L contributes
    // (-1)^L lambda^{L+1} prod mu_hat(parts)
    auto dfs = [&](auto&& self, int remaining, Complex prod, int length) -> void {
      if (remaining == 0) {
        const double sign = (length % 2 == 0) ? 1.0 : -1.0;
        total += sign * std::pow(lambda, length + 1) * prod;
        return;
      }
      for (int part = 1; part <= remaining; ++part) {
        self(self, remaining - part, prod * m[part], length + 1);
      }
    };
    dfs(dfs, n, Complex(1.0, 0.0), 0);
    t.alpha[n] = total;
  }
  return t;
}

AuxVectors aux_vectors(const L2Embedding& emb, const CoeffTable& table) {
  check_lambda(table.lambda, "aux_vectors");
  const int count = table.order();
  if (count > emb.order()) {
    throw std::invalid_argument("aux_vectors: embedding has too few exponentials");
  }
  AuxVectors aux;
  aux.lambda = table.lambda;
  aux.h = build_h_recursion(emb, table.lambda, count);
  // closed form h_n = sum_{j<=n} conj(alpha_{n-j}) e_j
  for (int n = 0; n < count; ++n) {
    ComplexVector closed = ComplexVector::Zero(emb.dim());
    for (int j = 0; j <= n; ++j) {
      closed += std::conj(table.alpha[n - j]) * emb.basis(j);
    }
    const double dev = emb.norm(aux.h[n] - closed);
    if (dev > aux.closed_form_residual) aux.closed_form_residual = dev;
  }
  if (aux.closed_form_residual > 1e-6) {
    throw std::runtime_error(
        "aux_vectors: recursion and closed form disagree, residual " +
        std::to_string(aux.closed_form_residual));
  }
  return aux;
}

std::vector<Complex> expansion_coeffs(const L2Embedding& emb,
                                      const AuxVectors& aux,
                                      const ComplexVector& f) {
  if (f.size() != emb.dim()) {
    throw std::invalid_argument("expansion_coeffs: f has wrong dimension");
  }
  std::vector<Complex> d(aux.h.size());
  for (std::size_t n = 0; n < aux.h.size(); ++n) {
    d[n] = emb.inner_product(aux.h[n], f);
  }
  return d;
}

EffectivenessSum effectiveness_sum(const CoeffTable& table) {
  if (table.order() < 2) {
    throw std::invalid_argument("effectiveness_sum: need at least alpha_1");
  }
  EffectivenessSum e;
  for (int n = 1; n < table.order(); ++n) e.sum += std::norm(table.alpha[n]);
  e.target = std::pow(table.lambda, 3) / (2.0 - table.lambda);
  e.gap = e.target - e.sum;
  return e;
}

UNormSequence u_norm_recursion(const L2Embedding& emb, const CoeffTable& table) {
  check_lambda(table.lambda, "u_norm_recursion");
  const int count = table.order();
  if (count > emb.order()) {
    throw std::invalid_argument("u_norm_recursion: embedding has too few exponentials");
  }
  UNormSequence seq;
  seq.direct.resize(count);
  seq.recursion.resize(count);
  ComplexVector u = ComplexVector::Zero(emb.dim());
  double r2 = table.lambda * table.lambda;
  const double slope = 1.0 - 2.0 / table.lambda;
  for (int n = 0; n < count; ++n) {
    u += table.alpha[n] * emb.basis(n);
    seq.direct[n] = emb.norm_sq(u);
    if (n > 0) r2 += slope * std::norm(table.alpha[n]);
    seq.recursion[n] = r2;
    const double dev = std::abs(seq.direct[n] - seq.recursion[n]);
    if (dev > seq.max_deviation) seq.max_deviation = dev;
  }
  return seq;
}

double verify_appendix_b(const L2Embedding& emb, const CoeffTable& table,
                         int i, int n) {
  check_lambda(table.lambda, "verify_appendix_b");
  if (i < 0 || n < i) throw std::out_of_range("verify_appendix_b: need 0 <= i <= n");
  if (n + 1 > emb.order() || n + 1 > table.order()) {
    throw std::out_of_range("verify_appendix_b: order too small for requested n");
  }
  const double lambda = table.lambda;

  // left side from the h recursion
  const std::vector<ComplexVector> h = build_h_recursion(emb, lambda, n + 1);
  const ComplexVector ei = emb.basis(i);
  ComplexVector lhs = -ei;
  for (int k = 0; k <= n; ++k) lhs += emb.inner_product(h[k], ei) * emb.basis(k);

  // right side from the alpha table
  auto v = [&](int m) {
    ComplexVector out = ComplexVector::Zero(emb.dim());
    for (int l = 0; l + m <= n; ++l) out += table.alpha[l] * emb.basis(l + m);
    return out;
  };
  const Complex shift((lambda - 1.0) / lambda, 0.0);
  ComplexVector rhs = shift * v(i);
  for (int j = 1; j <= i; ++j) rhs += emb.gram(0, j) * v(i - j);

  return emb.norm(lhs - rhs);
}

void write_csv(std::ostream& out, const CoeffTable& table) {
  out << "n,re_alpha,im_alpha,abs2_alpha,running_sum\n";
  double running = 0.0;  // sum over n >= 1, the effectiveness partial sum
  for (int n = 0; n < table.order(); ++n) {
    const double a2 = std::norm(table.alpha[n]);
    if (n > 0) running += a2;
    out << n << ',' << format_double(table.alpha[n].real()) << ','
        << format_double(table.alpha[n].imag()) << ',' << format_double(a2)
        << ',' << format_double(running) << '\n';
  }
}

}  // namespace kz
