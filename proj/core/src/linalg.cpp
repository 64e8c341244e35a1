#include "entmeas/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace entmeas {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& entries) {
  ComplexMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(const CVec& v) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& x : data_) x *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("operator*");
  ComplexMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Complex ComplexMatrix::trace() const {
  if (!square()) throw NotSquare("trace");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

double ComplexMatrix::hermiticity_defect() const {
  if (!square()) throw NotSquare("hermiticity_defect");
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return worst;
}

CVec ComplexMatrix::apply(const CVec& v) const {
  if (v.size() != cols_) throw DimensionMismatch("apply");
  CVec out(rows_, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

Complex sandwich(const CVec& u, const ComplexMatrix& a, const CVec& v) {
  const CVec av = a.apply(v);
  return inner(u, av);
}

Complex inner(const CVec& u, const CVec& v) {
  if (u.size() != v.size()) throw DimensionMismatch("inner");
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

double norm(const CVec& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

void normalize(CVec& v) {
  const double n = norm(v);
  if (n == 0.0) throw NotNormalized("cannot normalize the zero vector");
  for (auto& x : v) x /= n;
}

CVec kron_vec(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t p = 0; p + 1 < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * std::norm(a(p, q));
  return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p, q); accumulates into v.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r < 1e-300) return;
  const Complex phase = apq / r;  // e^{i phi}

  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (app - aqq) / (2.0 * r);
  double t;
  if (tau >= 0.0)
    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
  else
    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const std::size_t n = a.rows();
  // A <- U^dagger A U with U[p,p]=c, U[p,q]=-s e^{i phi}, U[q,p]=s e^{-i phi}, U[q,q]=c.
  const double app_new = app * c * c + 2.0 * r * c * s + aqq * s * s;
  const double aqq_new = app * s * s - 2.0 * r * c * s + aqq * c * c;
  a(p, p) = app_new;
  a(q, q) = aqq_new;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p || i == q) continue;
    const Complex aip = a(i, p);
    const Complex aiq = a(i, q);
    a(i, p) = aip * c + aiq * s * std::conj(phase);
    a(i, q) = -aip * s * phase + aiq * c;
    a(p, i) = std::conj(a(i, p));
    a(q, i) = std::conj(a(i, q));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Complex vip = v(i, p);
    const Complex viq = v(i, q);
    v(i, p) = vip * c + viq * s * std::conj(phase);
    v(i, q) = -vip * s * phase + viq * c;
  }
}

}  // namespace

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  if (!m.square()) throw NotSquare("hermitian_eigen");
  if (m.hermiticity_defect() > 1e-10)
    throw NotHermitian("asymmetry exceeds 1e-10 in hermitian_eigen");

  const std::size_t n = m.rows();
  // Work on the exactly Hermitian part; input is within tolerance of it.
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double tol = 1e-12 * std::max(1.0, a.frobenius_norm());
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(a) <= tol) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double di = a(i, i).real();
    const double dj = a(j, j).real();
    if (di != dj) return di < dj;
    return i < j;
  });

  HermitianEigen out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = a(src, src).real();
    // Phase convention: largest-magnitude component real positive.
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(v(i, src));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    Complex phase{1.0, 0.0};
    if (best > 0.0) phase = std::conj(v(arg, src)) / best;
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, src) * phase;
  }
  return out;
}

namespace {

// sum over kept eigenvalues of f(lambda) |v><v|
ComplexMatrix spectral_map(const HermitianEigen& eig, double (*f)(double), double keep_above) {
  const std::size_t n = eig.eigenvalues.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.eigenvalues[k];
    if (lambda <= keep_above) continue;
    const double fk = f(lambda);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += fk * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
  }
  return out;
}

}  // namespace

ComplexMatrix matrix_log_on_support(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  return spectral_map(eig, [](double x) { return std::log(x); }, kSupportCutoff);
}

ComplexMatrix matrix_sqrt(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  for (double lambda : eig.eigenvalues)
    if (lambda < -1e-10) throw NegativeEigenvalue("matrix_sqrt: eigenvalue below -1e-10");
  return spectral_map(eig, [](double x) { return std::sqrt(x); }, 0.0);
}

ComplexMatrix matrix_exp_hermitian(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  const std::size_t n = eig.eigenvalues.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = std::exp(eig.eigenvalues[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += fk * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{0.0, 0.0}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

std::vector<std::size_t> mixed_radix_strides(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

std::size_t product_of(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) p *= d;
  return p;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
  if (!m.square()) throw NotSquare("partial_trace");
  if (product_of(dims) != m.rows()) throw DimensionMismatch("partial_trace: dims");
  for (std::size_t k : keep)
    if (k >= dims.size()) throw DimensionMismatch("partial_trace: keep index");

  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) traced.push_back(k);

  std::vector<std::size_t> keep_dims, traced_dims;
  for (std::size_t k : keep) keep_dims.push_back(dims[k]);
  for (std::size_t k : traced) traced_dims.push_back(dims[k]);
  const std::size_t dk = product_of(keep_dims);
  const std::size_t dt = product_of(traced_dims);
  const auto strides = mixed_radix_strides(dims);
  const auto keep_strides = mixed_radix_strides(keep_dims);
  const auto traced_strides = mixed_radix_strides(traced_dims);

  // global index of (kept multi-index ik, traced multi-index it)
  auto global = [&](std::size_t ik, std::size_t it) {
    std::size_t g = 0;
    for (std::size_t a = 0; a < keep.size(); ++a)
      g += ((ik / keep_strides[a]) % keep_dims[a]) * strides[keep[a]];
    for (std::size_t a = 0; a < traced.size(); ++a)
      g += ((it / traced_strides[a]) % traced_dims[a]) * strides[traced[a]];
    return g;
  };

  ComplexMatrix out(dk, dk);
  for (std::size_t i = 0; i < dk; ++i)
    for (std::size_t j = 0; j < dk; ++j) {
      Complex s = 0.0;
      for (std::size_t t = 0; t < dt; ++t) s += m(global(i, t), global(j, t));
      out(i, j) = s;
    }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                std::size_t subsystem) {
  if (!m.square()) throw NotSquare("partial_transpose");
  if (dims.size() != 2) throw DimensionMismatch("partial_transpose: bipartite dims required");
  if (subsystem >= 2) throw DimensionMismatch("partial_transpose: subsystem index");
  if (dims[0] * dims[1] != m.rows()) throw DimensionMismatch("partial_transpose: dims");

  const std::size_t da = dims[0], db = dims[1];
  ComplexMatrix out(da * db, da * db);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t ap = 0; ap < da; ++ap)
        for (std::size_t bp = 0; bp < db; ++bp) {
          const std::size_t row = a * db + b, col = ap * db + bp;
          if (subsystem == 0)
            out(row, col) = m(ap * db + b, a * db + bp);
          else
            out(row, col) = m(a * db + bp, ap * db + b);
        }
  return out;
}

}  // namespace entmeas
