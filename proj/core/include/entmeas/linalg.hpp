#ifndef ENTMEAS_LINALG_HPP
#define ENTMEAS_LINALG_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "entmeas/errors.hpp"

namespace entmeas {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

// Dense row-major complex matrix. Small sizes only (the library never goes
// past 9x9), so everything is plain loops over contiguous storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(const std::vector<double>& entries);
  // Rank-1 projector |v><v| (v need not be normalized; used as given).
  static ComplexMatrix outer(const CVec& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_ && rows_ > 0; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const CVec& data() const { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;
  double frobenius_norm() const;
  // max_ij |A_ij - conj(A_ji)|
  double hermiticity_defect() const;
  CVec apply(const CVec& v) const;  // A v

 private:
  std::size_t rows_ = 0, cols_ = 0;
  CVec data_;
};

// <u|A|v> with the first argument conjugated.
Complex sandwich(const CVec& u, const ComplexMatrix& a, const CVec& v);
// <u|v>, first argument conjugated.
Complex inner(const CVec& u, const CVec& v);
double norm(const CVec& v);
void normalize(CVec& v);
CVec kron_vec(const CVec& a, const CVec& b);

struct HermitianEigen {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // orthonormal columns, column k <-> eigenvalue k
};

// Cyclic Jacobi diagonalization for complex Hermitian matrices. Deterministic
// for a fixed input: fixed sweep order, and each eigenvector's
// largest-magnitude component is rotated to be real positive.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

// Eigenvalues below this are treated as kernel by the on-support functions.
inline constexpr double kSupportCutoff = 1e-12;

// log(m) on the support: sum over eigenvalues above kSupportCutoff of
// ln(lambda) |v><v|; kernel directions contribute zero.
ComplexMatrix matrix_log_on_support(const ComplexMatrix& m);
// PSD square root; eigenvalues in [-1e-10, 0) are clamped to zero, anything
// lower throws NegativeEigenvalue.
ComplexMatrix matrix_sqrt(const ComplexMatrix& m);
// exp of a Hermitian matrix via its eigendecomposition.
ComplexMatrix matrix_exp_hermitian(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Partial trace over the subsystems NOT in `keep`. `dims` lists subsystem
// dimensions; kept subsystems retain their original relative order.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

// Transpose of one tensor factor of a bipartite operator; involutive.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                std::size_t subsystem);

// Mixed-radix index helpers shared by the tensor operations.
std::vector<std::size_t> mixed_radix_strides(const std::vector<std::size_t>& dims);
std::size_t product_of(const std::vector<std::size_t>& dims);

}  // namespace entmeas

#endif
