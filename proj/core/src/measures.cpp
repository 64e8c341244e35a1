#include "entmeas/measures.hpp"

#include <cmath>
#include <limits>

namespace entmeas {

namespace {

double xlnx(double x) { return x > kSupportCutoff ? x * std::log(x) : 0.0; }

}  // namespace

DensityMatrix marginal(const DensityMatrix& rho, std::size_t subsystem) {
  if (subsystem >= rho.dims().size()) throw DimensionMismatch("marginal: subsystem index");
  ComplexMatrix m = partial_trace(rho.matrix(), rho.dims(), {subsystem});
  return DensityMatrix(m, {rho.dims()[subsystem]});
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const HermitianEigen eig = hermitian_eigen(rho.matrix());
  double s = 0.0;
  for (double lambda : eig.eigenvalues) s -= xlnx(lambda);
  return s;
}

double mutual_information(const DensityMatrix& rho_ab) {
  if (!rho_ab.bipartite()) throw NotBipartite("mutual_information needs two subsystems");
  return von_neumann_entropy(marginal(rho_ab, 0)) + von_neumann_entropy(marginal(rho_ab, 1)) -
         von_neumann_entropy(rho_ab);
}

double relative_entropy(const DensityMatrix& sigma, const DensityMatrix& rho) {
  if (sigma.dims() != rho.dims()) throw DimensionMismatch("relative_entropy: dims differ");

  const HermitianEigen rho_eig = hermitian_eigen(rho.matrix());
  const std::size_t n = rho.dim();

  double cross = 0.0;  // tr sigma ln rho, accumulated over the support of rho
  for (std::size_t k = 0; k < n; ++k) {
    CVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rho_eig.eigenvectors(i, k);
    const double overlap = sandwich(v, sigma.matrix(), v).real();
    if (rho_eig.eigenvalues[k] <= kSupportCutoff) {
      if (overlap > 1e-8) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += overlap * std::log(rho_eig.eigenvalues[k]);
  }

  const HermitianEigen sigma_eig = hermitian_eigen(sigma.matrix());
  double self = 0.0;  // tr sigma ln sigma
  for (double lambda : sigma_eig.eigenvalues) self += xlnx(lambda);

  return std::max(0.0, self - cross);
}

double fidelity(const DensityMatrix& sigma, const DensityMatrix& rho) {
  if (sigma.dims() != rho.dims()) throw DimensionMismatch("fidelity: dims differ");
  const ComplexMatrix root = matrix_sqrt(rho.matrix());
  const ComplexMatrix inner_op = root * sigma.matrix() * root;
  const HermitianEigen eig = hermitian_eigen(inner_op);
  double sum = 0.0;
  for (double mu : eig.eigenvalues) {
    if (mu < -1e-10) throw NegativeEigenvalue("fidelity: inner operator eigenvalue below -1e-10");
    sum += std::sqrt(std::max(mu, 0.0));
  }
  const double f = sum * sum;
  return std::min(1.0, std::max(0.0, f));
}

double bures_distance(const DensityMatrix& sigma, const DensityMatrix& rho) {
  return 2.0 - 2.0 * std::sqrt(fidelity(sigma, rho));
}

double measurement_fidelity_bound(const DensityMatrix& sigma, const DensityMatrix& rho,
                                  const std::vector<ComplexMatrix>& povm) {
  if (sigma.dims() != rho.dims())
    throw DimensionMismatch("measurement_fidelity_bound: dims differ");
  const std::size_t n = sigma.dim();
  ComplexMatrix total(n, n);
  std::vector<ComplexMatrix> effects;
  effects.reserve(povm.size());
  for (const ComplexMatrix& a : povm) {
    if (a.rows() != n || a.cols() != n)
      throw DimensionMismatch("measurement_fidelity_bound: operator dims");
    effects.push_back(a.adjoint() * a);
    total += effects.back();
  }
  ComplexMatrix defect = total;
  defect -= ComplexMatrix::identity(n);
  if (defect.frobenius_norm() > 1e-9)
    throw IncompletePOVM("operators must satisfy sum A_i^dag A_i = I within 1e-9");

  double bound = 0.0;
  for (const ComplexMatrix& e : effects) {
    const double ps = std::max(0.0, (sigma.matrix() * e).trace().real());
    const double pr = std::max(0.0, (rho.matrix() * e).trace().real());
    bound += std::sqrt(ps) * std::sqrt(pr);
  }
  return bound;
}

}  // namespace entmeas
