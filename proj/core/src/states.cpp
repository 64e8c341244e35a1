#include "entmeas/states.hpp"

#include <cmath>
#include <utility>

namespace entmeas {

DensityMatrix::DensityMatrix(ComplexMatrix matrix, std::vector<std::size_t> dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidState("dims must be nonempty");
  if (!matrix_.square()) throw InvalidState("matrix must be square");
  if (product_of(dims_) != matrix_.rows())
    throw InvalidState("product of dims must equal matrix dimension");
  if (matrix_.hermiticity_defect() > 1e-10)
    throw InvalidState("matrix is not Hermitian within 1e-10");
  if (std::abs(matrix_.trace() - Complex{1.0, 0.0}) > 1e-10)
    throw InvalidState("trace must be 1 within 1e-10");
  const HermitianEigen eig = hermitian_eigen(matrix_);
  if (eig.eigenvalues.front() < -1e-10)
    throw InvalidState("eigenvalue below -1e-10, not positive semidefinite");
}

PureState::PureState(CVec amplitudes, std::vector<std::size_t> dims)
    : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidState("dims must be nonempty");
  if (product_of(dims_) != amplitudes_.size())
    throw InvalidState("product of dims must equal vector dimension");
  if (std::abs(norm(amplitudes_) - 1.0) > 1e-10)
    throw NotNormalized("pure state must have unit norm within 1e-10");
}

DensityMatrix density_from_pure(const PureState& psi) {
  return DensityMatrix(ComplexMatrix::outer(psi.amplitudes()), psi.dims());
}

DensityMatrix maximally_mixed(const std::vector<std::size_t>& dims) {
  const std::size_t n = product_of(dims);
  ComplexMatrix m = ComplexMatrix::identity(n);
  m *= Complex{1.0 / static_cast<double>(n), 0.0};
  return DensityMatrix(m, dims);
}

BellDiagonalSpec::BellDiagonalSpec(double l1, double l2, double l3, double l4)
    : BellDiagonalSpec(std::array<double, 4>{l1, l2, l3, l4}) {}

BellDiagonalSpec::BellDiagonalSpec(const std::array<double, 4>& ls) : lambdas(ls) {
  double sum = 0.0;
  for (double l : lambdas) {
    if (l < 0.0 || l > 1.0) throw InvalidWeights("each weight must lie in [0,1]");
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidWeights("weights must sum to 1 within 1e-12");
}

PureState bell_state(Bell which) {
  const double r = 1.0 / std::sqrt(2.0);
  CVec v(4, Complex{0.0, 0.0});
  switch (which) {
    case Bell::PsiPlus:
      v[1] = r;
      v[2] = r;
      break;
    case Bell::PsiMinus:
      v[1] = r;
      v[2] = -r;
      break;
    case Bell::PhiPlus:
      v[0] = r;
      v[3] = r;
      break;
    case Bell::PhiMinus:
      v[0] = r;
      v[3] = -r;
      break;
  }
  return PureState(v, {2, 2});
}

namespace {

constexpr std::array<Bell, 4> kBellOrder = {Bell::PsiPlus, Bell::PsiMinus, Bell::PhiPlus,
                                            Bell::PhiMinus};

}  // namespace

DensityMatrix bell_diagonal(const BellDiagonalSpec& spec) {
  ComplexMatrix m(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    if (spec.lambdas[i] == 0.0) continue;
    ComplexMatrix proj = ComplexMatrix::outer(bell_state(kBellOrder[i]).amplitudes());
    proj *= Complex{spec.lambdas[i], 0.0};
    m += proj;
  }
  return DensityMatrix(m, {2, 2});
}

std::array<double, 4> bell_basis_diagonal(const DensityMatrix& rho) {
  if (rho.dims() != std::vector<std::size_t>{2, 2})
    throw NotTwoQubits("bell_basis_diagonal needs dims [2,2]");
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    const CVec b = bell_state(kBellOrder[i]).amplitudes();
    out[i] = sandwich(b, rho.matrix(), b).real();
  }
  return out;
}

DensityMatrix werner_state(double F) {
  if (F < 0.0 || F > 1.0) throw OutOfRange("Werner fidelity must lie in [0,1]");
  const double rest = (1.0 - F) / 3.0;
  return bell_diagonal(BellDiagonalSpec(F, rest, rest, rest));
}

PureState pure_two_qubit(Complex alpha, Complex beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
    throw NotNormalized("|alpha|^2 + |beta|^2 must be 1 within 1e-10");
  CVec v(4, Complex{0.0, 0.0});
  v[0] = alpha;
  v[3] = beta;
  return PureState(v, {2, 2});
}

DensityMatrix random_density(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  const std::size_t n = product_of(dims);
  Rng rng(seed);
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.complex_gaussian();
  ComplexMatrix m = g * g.adjoint();
  m *= Complex{1.0, 0.0} / m.trace();
  // Symmetrize away the last bits of rounding noise.
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return DensityMatrix(h, dims);
}

CVec random_unit_vector(std::size_t dim, Rng& rng) {
  CVec v(dim);
  for (auto& x : v) x = rng.complex_gaussian();
  normalize(v);
  return v;
}

PureState random_product_pure(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  Rng rng(seed);
  CVec v{Complex{1.0, 0.0}};
  for (std::size_t d : dims) v = kron_vec(v, random_unit_vector(d, rng));
  return PureState(v, dims);
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  std::vector<CVec> cols(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    CVec v(dim);
    for (auto& x : v) x = rng.complex_gaussian();
    for (std::size_t j = 0; j < k; ++j) {
      const Complex c = inner(cols[j], v);
      for (std::size_t i = 0; i < dim; ++i) v[i] -= c * cols[j][i];
    }
    normalize(v);
    cols[k] = v;
  }
  ComplexMatrix u(dim, dim);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t i = 0; i < dim; ++i) u(i, k) = cols[k][i];
  return u;
}

}  // namespace entmeas
