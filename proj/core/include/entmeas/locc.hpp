#ifndef ENTMEAS_LOCC_HPP
#define ENTMEAS_LOCC_HPP

#include <utility>
#include <vector>

#include "entmeas/ree_solver.hpp"

namespace entmeas {

// Local operations with classical communication, as correlated Kraus pairs:
// rho -> sum_i (A_i x B_i) rho (A_i x B_i)^dag with
// sum_i (A_i^dag A_i) x (B_i^dag B_i) = I.
struct KrausChannel {
  std::vector<std::pair<ComplexMatrix, ComplexMatrix>> pairs;
};

// True iff the completeness sum equals the identity within 1e-9.
bool validate(const KrausChannel& ch, const std::vector<std::size_t>& dims);

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);

// Executable witness that the channel maps the separable set into itself:
// the image of realize(e) must come back Separable from ppt_test.
bool apply_to_separable(const KrausChannel& ch, const ProductEnsemble& e);

// Complete Kraus set on one subsystem: Gaussian blocks normalized by the
// inverse square root of their completeness sum.
std::vector<ComplexMatrix> random_kraus_set(std::size_t dim, std::size_t n_ops, Rng& rng);

// One-way channel in the "measure on A, rotate B conditionally" family:
// {A_i} a complete Kraus set on A, every B_i unitary.
KrausChannel random_locc(const std::vector<std::size_t>& dims, std::size_t n_pairs,
                         std::uint64_t seed);

// Channel running `first` and then `second`; pairs multiply out, validity is
// preserved.
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

// A B-side one-way channel composed after an A-side one: both communication
// directions in a single map.
KrausChannel random_two_way_locc(const std::vector<std::size_t>& dims, std::size_t n_pairs,
                                 std::uint64_t seed);

struct MonotonicityTrial {
  std::size_t index;
  double ree_before;
  double ree_after;
  double bures_before;
  double bures_after;
  double mi_before;
  double mi_after;
};

struct MonotonicityOutcome {
  std::size_t trials = 0;
  double ree_slack = 2e-3;
  double bures_slack = 5e-3;
  std::size_t ree_failures = 0;
  std::size_t bures_failures = 0;
  double max_ree_increase = 0.0;
  double max_bures_increase = 0.0;
  bool mi_increase_found = false;
  double best_mi_increase = 0.0;
  std::size_t mi_witness_trial = 0;
  std::vector<MonotonicityTrial> log;

  bool passed() const {
    return trials == 0 || (ree_failures == 0 && bures_failures == 0 && mi_increase_found);
  }
};

// Entanglement must not grow under these channels: random 2x2 states through
// random one-way/two-way channels, relative-entropy and Bures values before
// and after, plus a hunt for a mutual-information increase (which the
// measure-and-correlate channel of trial 0 always exhibits).
MonotonicityOutcome condition_three_harness(std::size_t trials, std::uint64_t seed,
                                            const SolverConfig& base);

}  // namespace entmeas

#endif
