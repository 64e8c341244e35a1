#include "entmeas/separable.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace entmeas {

void validate_ensemble(const ProductEnsemble& e) {
  if (e.dims.empty()) throw InvalidEnsemble("dims must be nonempty");
  if (e.terms.empty()) throw InvalidEnsemble("ensemble must have at least one term");
  const std::size_t n = product_of(e.dims);
  if (e.terms.size() > n * n)
    throw InvalidEnsemble("term count exceeds the (product of dims)^2 cap");

  double total = 0.0;
  for (const EnsembleTerm& t : e.terms) {
    if (t.weight < 0.0) throw InvalidEnsemble("negative weight");
    total += t.weight;
    if (t.groups.size() != t.factors.size())
      throw InvalidEnsemble("factor count must match group count");
    std::vector<std::size_t> seen;
    for (std::size_t k = 0; k < t.groups.size(); ++k) {
      std::size_t gdim = 1;
      for (std::size_t m : t.groups[k]) {
        if (m >= e.dims.size()) throw InvalidEnsemble("group index out of range");
        seen.push_back(m);
        gdim *= e.dims[m];
      }
      if (t.factors[k].size() != gdim)
        throw InvalidEnsemble("factor dimension does not match its group");
      if (std::abs(norm(t.factors[k]) - 1.0) > 1e-10)
        throw InvalidEnsemble("factor is not unit norm within 1e-10");
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t m = 0; m < e.dims.size(); ++m)
      if (m >= seen.size() || seen[m] != m)
        throw InvalidEnsemble("groups must partition the subsystems");
    if (seen.size() != e.dims.size())
      throw InvalidEnsemble("groups must partition the subsystems");
  }
  if (std::abs(total - 1.0) > 1e-10) throw InvalidEnsemble("weights must sum to 1 within 1e-10");
}

CVec term_vector(const EnsembleTerm& t, const std::vector<std::size_t>& dims) {
  const std::size_t n = product_of(dims);
  const auto strides = mixed_radix_strides(dims);
  CVec v(n);
  for (std::size_t g = 0; g < n; ++g) {
    Complex amp{1.0, 0.0};
    for (std::size_t k = 0; k < t.groups.size(); ++k) {
      std::size_t idx = 0;
      for (std::size_t m : t.groups[k]) idx = idx * dims[m] + (g / strides[m]) % dims[m];
      amp *= t.factors[k][idx];
    }
    v[g] = amp;
  }
  return v;
}

DensityMatrix realize(const ProductEnsemble& e) {
  validate_ensemble(e);
  const std::size_t n = product_of(e.dims);
  ComplexMatrix m(n, n);
  for (const EnsembleTerm& t : e.terms) {
    if (t.weight == 0.0) continue;
    const CVec v = term_vector(t, e.dims);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) += t.weight * v[i] * std::conj(v[j]);
  }
  return DensityMatrix(m, e.dims);
}

ProductEnsemble random_product_ensemble(const std::vector<std::size_t>& dims,
                                        std::size_t n_terms, std::uint64_t seed) {
  if (n_terms == 0) throw InvalidEnsemble("need at least one term");
  Rng rng(seed);
  ProductEnsemble e;
  e.dims = dims;
  std::vector<double> weights(n_terms);
  double total = 0.0;
  for (double& w : weights) {
    w = rng.uniform() + 1e-12;
    total += w;
  }
  for (std::size_t i = 0; i < n_terms; ++i) {
    EnsembleTerm t;
    t.weight = weights[i] / total;
    for (std::size_t m = 0; m < dims.size(); ++m) {
      t.groups.push_back({m});
      t.factors.push_back(random_unit_vector(dims[m], rng));
    }
    e.terms.push_back(std::move(t));
  }
  return e;
}

SeparabilityVerdict ppt_test(const DensityMatrix& rho) {
  if (!rho.bipartite()) throw NotBipartite("ppt_test needs two subsystems");
  const ComplexMatrix pt = partial_transpose(rho.matrix(), rho.dims(), 1);
  const HermitianEigen eig = hermitian_eigen(pt);
  const double min_eig = eig.eigenvalues.front();

  SeparabilityVerdict v;
  if (min_eig < -1e-9) {
    v.status = Verdict::Entangled;
    v.witness = min_eig;
    return v;
  }
  const std::size_t da = rho.dims()[0], db = rho.dims()[1];
  const bool definitive = da * db <= 6;
  v.status = definitive ? Verdict::Separable : Verdict::Inconclusive;
  return v;
}

bool bell_diagonal_separable(const BellDiagonalSpec& spec) {
  const double top = *std::max_element(spec.lambdas.begin(), spec.lambdas.end());
  return top <= 0.5 + 1e-12;
}

namespace {

// Unitary polar factor of a 2x2 matrix: E (E^dag E)^{-1/2}.
ComplexMatrix polar_unitary(const ComplexMatrix& e) {
  ComplexMatrix g = e;
  HermitianEigen h = hermitian_eigen(g.adjoint() * g);
  if (h.eigenvalues.front() < 1e-24 * std::max(1.0, h.eigenvalues.back())) {
    g += 1e-10 * ComplexMatrix::identity(g.rows());
    h = hermitian_eigen(g.adjoint() * g);
  }
  ComplexMatrix inv_root(g.rows(), g.cols());
  for (std::size_t k = 0; k < h.eigenvalues.size(); ++k) {
    const double f = 1.0 / std::sqrt(std::max(h.eigenvalues[k], 1e-300));
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j)
        inv_root(i, j) += f * h.eigenvectors(i, k) * std::conj(h.eigenvectors(j, k));
  }
  return g * inv_root;
}

CVec entangled_vector(const ComplexMatrix& ua, const ComplexMatrix& ub) {
  // (U_A x U_B)|Phi+> has component (U_A U_B^T)_{ab} / sqrt2 at index (a,b).
  const ComplexMatrix w = ua * ub.transpose();
  const double r = 1.0 / std::sqrt(2.0);
  CVec v(4);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) v[2 * a + b] = r * w(a, b);
  return v;
}

}  // namespace

double max_entangled_overlap(const DensityMatrix& rho) {
  if (rho.dims() != std::vector<std::size_t>{2, 2})
    throw NotTwoQubits("max_entangled_overlap needs dims [2,2]");

  constexpr std::size_t kRestarts = 50;
  constexpr std::size_t kIterations = 200;
  Rng rng(0x9e3779b97f4a7c15ULL);

  double best = 0.0;
  for (std::size_t r = 0; r < kRestarts; ++r) {
    ComplexMatrix ua =
        r == 0 ? ComplexMatrix::identity(2) : random_unitary(2, rng);
    ComplexMatrix ub =
        r == 0 ? ComplexMatrix::identity(2) : random_unitary(2, rng);

    CVec v = entangled_vector(ua, ub);
    double f = sandwich(v, rho.matrix(), v).real();
    for (std::size_t it = 0; it < kIterations; ++it) {
      // Fix U_B, lift the quadratic form to vec(U_A) and take the polar
      // factor of its environment matrix; then the same with roles swapped.
      const ComplexMatrix mb =
          kron(ComplexMatrix::identity(2), ub).adjoint() * rho.matrix() *
          kron(ComplexMatrix::identity(2), ub);
      CVec va(4);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t ap = 0; ap < 2; ++ap) va[2 * a + ap] = ua(a, ap);
      const CVec ea = mb.apply(va);
      ComplexMatrix env_a(2, 2);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t ap = 0; ap < 2; ++ap) env_a(a, ap) = ea[2 * a + ap];
      ua = polar_unitary(env_a);

      const ComplexMatrix ma = kron(ua, ComplexMatrix::identity(2)).adjoint() * rho.matrix() *
                               kron(ua, ComplexMatrix::identity(2));
      CVec vb(4);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) vb[2 * a + b] = ub(b, a);
      const CVec eb = ma.apply(vb);
      ComplexMatrix env_bt(2, 2);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) env_bt(a, b) = eb[2 * a + b];
      ub = polar_unitary(env_bt).transpose();

      v = entangled_vector(ua, ub);
      const double f_new = sandwich(v, rho.matrix(), v).real();
      if (f_new < f + 1e-10) {
        f = std::max(f, f_new);
        break;
      }
      f = f_new;
    }
    best = std::max(best, f);
  }
  return best;
}

std::pair<double, BellDiagonalSpec> bell_diagonal_ree(const BellDiagonalSpec& spec) {
  const auto& l = spec.lambdas;
  const auto top = static_cast<std::size_t>(
      std::distance(l.begin(), std::max_element(l.begin(), l.end())));
  const double big = l[top];
  if (big <= 0.5) return {0.0, spec};

  auto xlnx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  const double value = xlnx(big) + xlnx(1.0 - big) + std::log(2.0);

  // p_i = lambda_i / (2(1-L)) for i past the dominant slot, written as a
  // renormalized tail so the weights sum to one exactly; the L = 1 limit
  // spreads the remaining mass uniformly.
  double tail = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    if (i != top) tail += l[i];
  std::array<double, 4> p{};
  p[top] = 0.5;
  for (std::size_t i = 0; i < 4; ++i)
    if (i != top) p[i] = tail < 1e-15 ? 0.5 / 3.0 : 0.5 * l[i] / tail;
  return {value, BellDiagonalSpec(p)};
}

double classical_correlations(const DensityMatrix& rho) {
  if (!rho.bipartite()) throw NotBipartite("classical_correlations needs two subsystems");
  const DensityMatrix a = marginal(rho, 0);
  const DensityMatrix b = marginal(rho, 1);
  const DensityMatrix product(kron(a.matrix(), b.matrix()), rho.dims());
  return relative_entropy(rho, product);
}

}  // namespace entmeas
