#ifndef ENTMEAS_SEPARABLE_HPP
#define ENTMEAS_SEPARABLE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "entmeas/measures.hpp"
#include "entmeas/states.hpp"

namespace entmeas {

// One weighted product term. `groups` partitions the subsystem indices into
// the blocks the term factorizes across, and factor k is a unit vector on the
// combined dimension of groups[k]. Bipartite terms use {{0},{1}}; tripartite
// minimizers may keep an entangled pair inside one block, e.g. {{0,1},{2}}.
struct EnsembleTerm {
  double weight;
  std::vector<std::vector<std::size_t>> groups;
  std::vector<CVec> factors;
};

// Convex combination of product projectors: an explicit membership
// certificate for the separable set.
struct ProductEnsemble {
  std::vector<std::size_t> dims;
  std::vector<EnsembleTerm> terms;
};

// Throws InvalidEnsemble unless weights are nonnegative and sum to 1 within
// 1e-10, every factor is unit norm, every term's groups partition the
// subsystems, and the term count respects the cap (product of dims squared).
void validate_ensemble(const ProductEnsemble& e);

// Full-space vector of one term, factors expanded to the canonical subsystem
// order.
CVec term_vector(const EnsembleTerm& t, const std::vector<std::size_t>& dims);

// sum_i p_i |v_i><v_i| as a DensityMatrix.
DensityMatrix realize(const ProductEnsemble& e);

// Fully product ensemble with `n_terms` random terms, one single-subsystem
// factor per subsystem. Deterministic per seed.
ProductEnsemble random_product_ensemble(const std::vector<std::size_t>& dims,
                                        std::size_t n_terms, std::uint64_t seed);

enum class Verdict { Separable, Entangled, Inconclusive };

struct SeparabilityVerdict {
  Verdict status;
  // Most negative partial-transpose eigenvalue (Entangled verdicts).
  std::optional<double> witness;
  // Explicit decomposition when one is available; ppt_test leaves this empty,
  // certified verdicts from the solver layer fill it in.
  std::optional<ProductEnsemble> certificate;
};

// Peres criterion. Definitive for 2x2 and 2x3 (both orders); for larger dims
// a negative partial transpose still certifies entanglement, everything else
// is Inconclusive.
SeparabilityVerdict ppt_test(const DensityMatrix& rho);

// Spectrum test for Bell-diagonal states: separable iff max lambda <= 1/2.
bool bell_diagonal_separable(const BellDiagonalSpec& spec);

// max over maximally entangled |e> = (U_A x U_B)|Phi+> of <e|rho|e>,
// by alternating polar-decomposition ascent with random restarts. A result
// above 1/2 certifies entanglement.
double max_entangled_overlap(const DensityMatrix& rho);

// Closed form for the entanglement of a Bell-diagonal state, with the
// minimizing Bell-diagonal weights. Zero when the largest weight is <= 1/2;
// otherwise L ln L + (1-L) ln(1-L) + ln 2 for the largest weight L, minimizer
// 1/2 at the dominant slot and lambda_i/(2(1-L)) elsewhere. In the L = 1
// limit the remaining mass is spread uniformly.
std::pair<double, BellDiagonalSpec> bell_diagonal_ree(const BellDiagonalSpec& spec);

// D(rho || rho_A x rho_B): the classical-correlation content of rho.
double classical_correlations(const DensityMatrix& rho);

}  // namespace entmeas

#endif
