#include <kz/expansion.hpp>

#include <stdexcept>

#include <kz/io.hpp>

namespace kz {

ExpansionReport expand(const L2Embedding& emb, const AuxVectors& aux,
                       const ComplexVector& f, int terms) {
  if (terms < 1) throw std::invalid_argument("expand: terms < 1");
  if (terms > static_cast<int>(aux.h.size()) || terms > emb.order()) {
    throw std::invalid_argument("expand: not enough h vectors or exponentials");
  }
  if (f.size() != emb.dim()) {
    throw std::invalid_argument("expand: f has wrong dimension");
  }
  ExpansionReport rep;
  rep.lambda = aux.lambda;
  rep.parseval_target = aux.lambda / (2.0 - aux.lambda) * emb.norm_sq(f);
  rep.partial_residuals.reserve(terms + 1);
  rep.parseval_partial.reserve(terms + 1);
  rep.coeffs.reserve(terms);

  ComplexVector acc = ComplexVector::Zero(emb.dim());
  rep.partial_residuals.push_back(emb.norm(f));
  rep.parseval_partial.push_back(0.0);
  double parseval = 0.0;
  for (int n = 0; n < terms; ++n) {
    const Complex d = emb.inner_product(aux.h[n], f);
    rep.coeffs.push_back(d);
    acc += d * emb.basis(n);
    parseval += std::norm(d);
    rep.partial_residuals.push_back(emb.norm(f - acc));
    rep.parseval_partial.push_back(parseval);
  }
  return rep;
}

std::vector<Complex> standard_fourier_coeffs(const L2Embedding& emb,
                                             const ComplexVector& f,
                                             int count) {
  if (count < 1 || count > emb.order()) {
    throw std::invalid_argument("standard_fourier_coeffs: count outside order");
  }
  if (f.size() != emb.dim()) {
    throw std::invalid_argument("standard_fourier_coeffs: f has wrong dimension");
  }
  std::vector<Complex> fhat(count);
  for (int j = 0; j < count; ++j) fhat[j] = emb.inner_product(emb.basis(j), f);
  return fhat;
}

void write_csv(std::ostream& out, const ExpansionReport& report) {
  out << "terms,residual,parseval_partial,parseval_target\n";
  for (std::size_t n = 0; n < report.partial_residuals.size(); ++n) {
    out << n << ',' << format_double(report.partial_residuals[n]) << ','
        << format_double(report.parseval_partial[n]) << ','
        << format_double(report.parseval_target) << '\n';
  }
}

}  // namespace kz
