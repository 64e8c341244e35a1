#include <doctest.h>

#include <cmath>

#include "entmeas/ree_solver.hpp"

using namespace entmeas;

namespace {

const double kLn2 = std::log(2.0);

SolverConfig config22() { return SolverConfig::defaults_for({2, 2}); }

DensityMatrix conjugated(const DensityMatrix& rho, const ComplexMatrix& u) {
  return DensityMatrix(u * rho.matrix() * u.adjoint(), rho.dims());
}

PureState ghz() {
  const double s = 1.0 / std::sqrt(2.0);
  CVec v(8, Complex{0.0, 0.0});
  v[0] = s;
  v[7] = s;
  return PureState(v, {2, 2, 2});
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("maximally entangled two qubit value") {
  const MeasureResult r = ree(density_from_pure(bell_state(Bell::PhiPlus)), config22());
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(kLn2).epsilon(1e-3));
  CHECK(r.gap < 1e-6);
  CHECK(r.distance_kind == DistanceKind::RelativeEntropy);
  CHECK_FALSE(r.heuristic_gap);
  CHECK_NOTHROW(validate_ensemble(r.minimizer));
}

TEST_CASE("bell diagonal values match the closed form") {
  const BellDiagonalSpec hard(0.7, 0.1, 0.1, 0.1);
  const MeasureResult r = ree(bell_diagonal(hard), config22());
  const auto [closed, minimizer] = bell_diagonal_ree(hard);
  CHECK(closed == doctest::Approx(0.0822829).epsilon(1e-6));
  CHECK(r.value == doctest::Approx(closed).epsilon(1e-3));

  // duality gap brackets the true value
  CHECK(r.value - r.gap <= closed + 1e-12);
  CHECK(closed <= r.value + 1e-12);

  // the realized minimizer recovers the predicted bell spectrum
  const std::array<double, 4> slots = bell_basis_diagonal(r.realized_minimizer);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::abs(slots[i] - minimizer.lambdas[i]) < 1e-2);

  const MeasureResult w = ree(werner_state(0.625), config22());
  CHECK(w.value == doctest::Approx(0.0315839).epsilon(1e-3));
}

TEST_CASE("separable inputs land at zero") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const DensityMatrix rho = realize(random_product_ensemble({2, 2}, 4, seed));
    const MeasureResult r = ree(rho, config22());
    CHECK(r.value < 1e-5);
  }
}

TEST_CASE("result invariants hold along the trace") {
  const MeasureResult r = ree(bell_diagonal(BellDiagonalSpec(0.6, 0.2, 0.1, 0.1)), config22());
  CHECK(r.gap >= -1e-10);
  CHECK(r.iterations == r.trace.size());
  for (std::size_t t = 0; t < r.trace.size(); ++t) {
    // accepted steps never push the objective uphill
    CHECK(r.trace[t].objective_after <= r.trace[t].objective_before + 1e-9);
    CHECK(r.trace[t].gap >= 0.0);
    if (t + 1 < r.trace.size())
      CHECK(r.trace[t + 1].objective_before ==
            doctest::Approx(r.trace[t].objective_after).epsilon(1e-12));
  }
  if (r.converged) CHECK(r.gap < config22().gap_tolerance);
}

TEST_CASE("certificate soundness against known values") {
  for (double l1 : {0.55, 0.75, 0.9}) {
    const double rest = (1.0 - l1) / 3.0;
    const BellDiagonalSpec spec(l1, rest, rest, rest);
    const MeasureResult r = ree(bell_diagonal(spec), config22());
    const double truth = bell_diagonal_ree(spec).first;
    CHECK(r.value + 1e-12 >= truth);
    CHECK(r.value - r.gap <= truth + 1e-12);
  }
}

TEST_CASE("local unitaries leave the value unchanged") {
  Rng rng(55);
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    const DensityMatrix rho = random_density({2, 2}, seed);
    const ComplexMatrix u = kron(random_unitary(2, rng), random_unitary(2, rng));
    const double before = ree(rho, config22()).value;
    const double after = ree(conjugated(rho, u), config22()).value;
    CHECK(std::abs(before - after) <= 2e-3);
  }
}

TEST_CASE("linear oracle matches a dense grid search") {
  Rng grid_rng(303);
  for (int rep = 0; rep < 3; ++rep) {
    // random two qubit hermitian objective
    ComplexMatrix g(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      g(i, i) = grid_rng.gaussian();
      for (std::size_t j = i + 1; j < 4; ++j) {
        g(i, j) = grid_rng.complex_gaussian();
        g(j, i) = std::conj(g(i, j));
      }
    }

    const PureState best = product_oracle(g, {2, 2}, config22());
    const double found = sandwich(best.amplitudes(), g, best.amplitudes()).real();

    // coarse scan over product states |a(theta,phi)> x |b(theta,phi)>
    double scanned = 1e300;
    const int nt = 24, np = 48;
    for (int ia = 0; ia <= nt; ++ia)
      for (int ja = 0; ja < np; ++ja)
        for (int ib = 0; ib <= nt; ++ib)
          for (int jb = 0; jb < np; ++jb) {
            const double ta = M_PI * ia / nt, pa = 2.0 * M_PI * ja / np;
            const double tb = M_PI * ib / nt, pb = 2.0 * M_PI * jb / np;
            const CVec a{std::cos(ta / 2),
                         std::polar(std::sin(ta / 2), pa)};
            const CVec b{std::cos(tb / 2),
                         std::polar(std::sin(tb / 2), pb)};
            const CVec v = kron_vec(a, b);
            scanned = std::min(scanned, sandwich(v, g, v).real());
          }

    // the oracle must not lose to the scan; the scan grid is ~4e-3 coarse
    CHECK(found <= scanned + 1e-6);
    CHECK(found >= scanned - 2e-2);
  }
}

TEST_CASE("three party solver") {
  const SolverConfig cfg = SolverConfig::defaults_for({2, 2, 2});

  // entanglement confined to a two party block costs nothing
  const CVec bell_ab = kron_vec(bell_state(Bell::PhiPlus).amplitudes(), {1.0, 0.0});
  const MeasureResult block = tripartite_ree(density_from_pure(PureState(bell_ab, {2, 2, 2})), cfg);
  CHECK(block.value < 1e-4);

  const DensityMatrix prod = density_from_pure(random_product_pure({2, 2, 2}, 91));
  CHECK(tripartite_ree(prod, cfg).value < 1e-4);

  // genuinely three party entanglement does not
  const MeasureResult g1 = tripartite_ree(density_from_pure(ghz()), cfg);
  CHECK(g1.value > 0.1);
  SolverConfig cfg2 = cfg;
  cfg2.seed = 9;
  const MeasureResult g2 = tripartite_ree(density_from_pure(ghz()), cfg2);
  CHECK(std::abs(g1.value - g2.value) <= 1e-3);

  CHECK_THROWS_AS(tripartite_ree(maximally_mixed({2, 2}), cfg), DimensionTooLarge);
  CHECK_THROWS_AS(ree(maximally_mixed({2}), SolverConfig{}), DimensionTooLarge);
}

TEST_CASE("bures solver") {
  const MeasureResult r = bures_entanglement(density_from_pure(bell_state(Bell::PhiPlus)),
                                             config22());
  CHECK(r.value == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-3));
  CHECK(r.distance_kind == DistanceKind::Bures);
  CHECK(r.heuristic_gap);  // no duality certificate for this distance
  CHECK_NOTHROW(validate_ensemble(r.minimizer));

  const DensityMatrix sep = realize(random_product_ensemble({2, 2}, 4, 71));
  CHECK(bures_entanglement(sep, config22()).value < 1e-4);
}

TEST_CASE("quantum and classical parts of the correlation") {
  const SplitResult s = quantum_classical_split(bell_diagonal(BellDiagonalSpec(0.7, 0.1, 0.1, 0.1)),
                                                config22());
  CHECK(s.quantum == doctest::Approx(0.0822829).epsilon(1e-3));
  CHECK(s.classical == doctest::Approx(0.1438410).epsilon(1e-3));
  CHECK(s.quantum == doctest::Approx(s.ree_result.value));

  // For a maximally entangled state the quantum part is ln 2. The classical
  // part depends on which closest separable state the solver lands on: the
  // minimizer is not unique there (any separable state holding the Bell
  // vector as a 1/2-eigenvector attains ln 2), so only bound it.
  const SplitResult b = quantum_classical_split(density_from_pure(bell_state(Bell::PhiPlus)),
                                                config22());
  CHECK(b.quantum == doctest::Approx(kLn2).epsilon(1e-3));
  CHECK(b.classical >= 0.0);
  CHECK(b.classical <= 2.0 * kLn2 + 1e-9);
}

TEST_CASE("certified separability attaches an explicit decomposition") {
  const DensityMatrix sep = realize(random_product_ensemble({2, 2}, 4, 81));
  const SeparabilityVerdict v = certified_separability(sep, config22());
  CHECK(v.status == Verdict::Separable);
  REQUIRE(v.certificate.has_value());
  CHECK_NOTHROW(validate_ensemble(*v.certificate));
  // the certificate is a genuine decomposition of a nearby state
  CHECK(relative_entropy(sep, realize(*v.certificate)) < 1e-6);

  const SeparabilityVerdict e =
      certified_separability(density_from_pure(bell_state(Bell::PhiPlus)), config22());
  CHECK(e.status == Verdict::Entangled);
  REQUIRE(e.witness.has_value());
  CHECK(*e.witness == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK_FALSE(e.certificate.has_value());
}

TEST_CASE("solver configuration defaults") {
  const SolverConfig cfg = SolverConfig::defaults_for({2, 2});
  CHECK(cfg.max_iterations == 5000);
  CHECK(cfg.gap_tolerance == 1e-6);
  CHECK(cfg.oracle_restarts == 20);
  CHECK(cfg.oracle_iterations == 100);
  CHECK(cfg.seed == 0);
}

}  // TEST_SUITE
