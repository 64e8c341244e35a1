#include <doctest.h>

#include <cmath>
#include <limits>

#include "entmeas/measures.hpp"
#include "entmeas/states.hpp"

using namespace entmeas;

namespace {

const double kLn2 = std::log(2.0);

DensityMatrix conjugated(const DensityMatrix& rho, const ComplexMatrix& u) {
  return DensityMatrix(u * rho.matrix() * u.adjoint(), rho.dims());
}

DensityMatrix product_of_marginals(const DensityMatrix& rho) {
  return DensityMatrix(kron(marginal(rho, 0).matrix(), marginal(rho, 1).matrix()), rho.dims());
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("von neumann entropy on known spectra") {
  // 0.625 ln(1/0.625) + 3 * 0.125 ln(1/0.125)
  const DensityMatrix mixed(ComplexMatrix::diagonal({0.625, 0.125, 0.125, 0.125}), {2, 2});
  CHECK(von_neumann_entropy(mixed) == doctest::Approx(1.0735428).epsilon(1e-6));

  const DensityMatrix pure = density_from_pure(bell_state(Bell::PhiPlus));
  CHECK(std::abs(von_neumann_entropy(pure)) < 1e-12);

  CHECK(von_neumann_entropy(maximally_mixed({2, 2})) ==
        doctest::Approx(2.0 * kLn2).epsilon(1e-12));

  // entropy is basis independent
  Rng rng(11);
  const ComplexMatrix u = random_unitary(4, rng);
  CHECK(von_neumann_entropy(conjugated(mixed, u)) ==
        doctest::Approx(von_neumann_entropy(mixed)).epsilon(1e-10));
}

TEST_CASE("relative entropy basics") {
  const DensityMatrix bell = density_from_pure(bell_state(Bell::PhiPlus));
  const DensityMatrix mm = maximally_mixed({2, 2});

  CHECK(std::abs(relative_entropy(bell, bell)) < 1e-10);
  CHECK(relative_entropy(bell, mm) == doctest::Approx(2.0 * kLn2).epsilon(1e-10));

  // support of sigma outside the support of rho
  const DensityMatrix zero(ComplexMatrix::diagonal({1.0, 0.0}), {2});
  const DensityMatrix one(ComplexMatrix::diagonal({0.0, 1.0}), {2});
  CHECK(relative_entropy(zero, one) == std::numeric_limits<double>::infinity());

  // asymmetric in its arguments
  const DensityMatrix p(ComplexMatrix::diagonal({0.7, 0.3}), {2});
  const DensityMatrix q(ComplexMatrix::diagonal({0.4, 0.6}), {2});
  const double pq = 0.7 * std::log(0.7 / 0.4) + 0.3 * std::log(0.3 / 0.6);
  CHECK(relative_entropy(p, q) == doctest::Approx(pq).epsilon(1e-12));
  CHECK(relative_entropy(p, q) != doctest::Approx(relative_entropy(q, p)).epsilon(1e-6));
}

TEST_CASE("mutual information equals distance to the marginal product") {
  for (std::uint64_t seed : {3u, 17u, 29u}) {
    const DensityMatrix rho = random_density({2, 2}, seed);
    CHECK(mutual_information(rho) ==
          doctest::Approx(relative_entropy(rho, product_of_marginals(rho))).epsilon(1e-9));
  }
  CHECK(mutual_information(density_from_pure(bell_state(Bell::PsiMinus))) ==
        doctest::Approx(2.0 * kLn2).epsilon(1e-10));
  CHECK(std::abs(mutual_information(maximally_mixed({2, 2}))) < 1e-12);
}

TEST_CASE("relative entropy is invariant under joint unitaries") {
  Rng rng(23);
  const DensityMatrix sigma = random_density({2, 2}, 101);
  const DensityMatrix rho = random_density({2, 2}, 202);
  const double base = relative_entropy(sigma, rho);
  for (int rep = 0; rep < 3; ++rep) {
    const ComplexMatrix u = random_unitary(4, rng);
    CHECK(relative_entropy(conjugated(sigma, u), conjugated(rho, u)) ==
          doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("tracing out a subsystem cannot increase distinguishability") {
  for (std::uint64_t seed : {5u, 6u, 7u, 8u}) {
    const DensityMatrix sigma = random_density({2, 2}, seed);
    const DensityMatrix rho = random_density({2, 2}, seed + 1000);
    const double whole = relative_entropy(sigma, rho);
    const double part = relative_entropy(marginal(sigma, 0), marginal(rho, 0));
    CHECK(part <= whole + 1e-8);

    const double f_whole = fidelity(sigma, rho);
    const double f_part = fidelity(marginal(sigma, 0), marginal(rho, 0));
    CHECK(f_part >= f_whole - 1e-8);
  }
}

TEST_CASE("fidelity and bures distance") {
  const DensityMatrix bell = density_from_pure(bell_state(Bell::PhiPlus));
  const DensityMatrix mm = maximally_mixed({2, 2});

  CHECK(fidelity(bell, bell) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(bures_distance(bell, bell)) < 1e-7);

  // pure vs mixed: F = <psi|rho|psi>
  CHECK(fidelity(bell, mm) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(bures_distance(bell, mm) == doctest::Approx(2.0 - 2.0 * std::sqrt(0.25)).epsilon(1e-9));

  // orthogonal pure states are maximally far apart
  const DensityMatrix other = density_from_pure(bell_state(Bell::PsiMinus));
  CHECK(std::abs(fidelity(bell, other)) < 1e-10);
  CHECK(bures_distance(bell, other) == doctest::Approx(2.0).epsilon(1e-10));

  // symmetric in its arguments
  const DensityMatrix a = random_density({2, 2}, 31);
  const DensityMatrix b = random_density({2, 2}, 32);
  CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-10));
}

TEST_CASE("measurement bound reaches its extremes") {
  const DensityMatrix a = random_density({2, 2}, 61);
  const DensityMatrix b = random_density({2, 2}, 62);

  // the trivial measurement learns nothing
  CHECK(measurement_fidelity_bound(a, b, {ComplexMatrix::identity(4)}) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // identical states cannot be told apart by any measurement
  std::vector<ComplexMatrix> basis;
  for (std::size_t k = 0; k < 4; ++k) {
    CVec e(4, Complex{0.0, 0.0});
    e[k] = 1.0;
    basis.push_back(ComplexMatrix::outer(e));
  }
  CHECK(measurement_fidelity_bound(a, a, basis) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(
      measurement_fidelity_bound(a, b, {ComplexMatrix::outer({1.0, 0.0, 0.0, 0.0})}),
      IncompletePOVM);
}

TEST_CASE("measurement bound on commuting states is the classical overlap") {
  const DensityMatrix p(ComplexMatrix::diagonal({0.7, 0.3}), {2});
  const DensityMatrix q(ComplexMatrix::diagonal({0.4, 0.6}), {2});
  std::vector<ComplexMatrix> proj{ComplexMatrix::outer({1.0, 0.0}),
                                  ComplexMatrix::outer({0.0, 1.0})};
  const double bound = measurement_fidelity_bound(p, q, proj);
  CHECK(bound == doctest::Approx(0.9534144).epsilon(1e-6));
  // for commuting states the projective bound is tight: bound^2 = fidelity
  CHECK(bound * bound == doctest::Approx(fidelity(p, q)).epsilon(1e-9));
}

TEST_CASE("squared measurement bound dominates fidelity") {
  Rng rng(77);
  for (int rep = 0; rep < 5; ++rep) {
    const DensityMatrix a = random_density({2}, 400 + rep);
    const DensityMatrix b = random_density({2}, 500 + rep);
    // random orthonormal basis measurement
    const ComplexMatrix u = random_unitary(2, rng);
    std::vector<ComplexMatrix> povm;
    for (std::size_t k = 0; k < 2; ++k) {
      CVec col(2);
      for (std::size_t r = 0; r < 2; ++r) col[r] = u(r, k);
      povm.push_back(ComplexMatrix::outer(col));
    }
    const double bound = measurement_fidelity_bound(a, b, povm);
    CHECK(bound * bound >= fidelity(a, b) - 1e-9);
  }
}

}  // TEST_SUITE
