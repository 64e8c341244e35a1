#ifndef ENTMEAS_STATES_HPP
#define ENTMEAS_STATES_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "entmeas/linalg.hpp"
#include "entmeas/rng.hpp"

namespace entmeas {

// Hermitian, positive semidefinite, unit-trace matrix tagged with subsystem
// dimensions. The constructor validates all of that and throws InvalidState,
// so a DensityMatrix in hand is always a usable quantum state.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix matrix, std::vector<std::size_t> dims);

  const ComplexMatrix& matrix() const { return matrix_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim() const { return matrix_.rows(); }
  bool bipartite() const { return dims_.size() == 2; }

 private:
  ComplexMatrix matrix_;
  std::vector<std::size_t> dims_;
};

// Unit vector tagged with subsystem dimensions.
class PureState {
 public:
  PureState(CVec amplitudes, std::vector<std::size_t> dims);

  const CVec& amplitudes() const { return amplitudes_; }
  const std::vector<std::size_t>& dims() const { return dims_; }

 private:
  CVec amplitudes_;
  std::vector<std::size_t> dims_;
};

DensityMatrix density_from_pure(const PureState& psi);
DensityMatrix maximally_mixed(const std::vector<std::size_t>& dims);

// Four weights on the Bell basis in the fixed order (Psi+, Psi-, Phi+, Phi-).
struct BellDiagonalSpec {
  BellDiagonalSpec(double l1, double l2, double l3, double l4);
  explicit BellDiagonalSpec(const std::array<double, 4>& ls);

  std::array<double, 4> lambdas;
};

enum class Bell { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

// Concrete vectors: Phi+- = (1,0,0,+-1)/sqrt2, Psi+ = (0,1,1,0)/sqrt2,
// Psi- = (0,1,-1,0)/sqrt2.
PureState bell_state(Bell which);

// W = sum_i lambda_i |bell_i><bell_i| in the (Psi+, Psi-, Phi+, Phi-) order.
DensityMatrix bell_diagonal(const BellDiagonalSpec& spec);

// Diagonal weights of rho in the Bell basis, same order as BellDiagonalSpec.
std::array<double, 4> bell_basis_diagonal(const DensityMatrix& rho);

// Bell-diagonal state with weights (F, (1-F)/3, (1-F)/3, (1-F)/3); the
// dominant weight sits on Psi+.
DensityMatrix werner_state(double F);

// alpha|00> + beta|11>
PureState pure_two_qubit(Complex alpha, Complex beta);

// G G^dagger / tr, G with independent complex Gaussian entries. Full rank
// with probability 1; deterministic per seed.
DensityMatrix random_density(const std::vector<std::size_t>& dims, std::uint64_t seed);

// Tensor product of independent Gaussian-normalized unit vectors.
PureState random_product_pure(const std::vector<std::size_t>& dims, std::uint64_t seed);

CVec random_unit_vector(std::size_t dim, Rng& rng);

// Haar-distributed via Gram-Schmidt on a Ginibre matrix.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

}  // namespace entmeas

#endif
