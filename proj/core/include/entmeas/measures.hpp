#ifndef ENTMEAS_MEASURES_HPP
#define ENTMEAS_MEASURES_HPP

#include <vector>

#include "entmeas/states.hpp"

namespace entmeas {

// All entropic quantities are in nats. Unit conversion happens only at the
// presentation layer.

DensityMatrix marginal(const DensityMatrix& rho, std::size_t subsystem);

// S(rho) = -tr(rho ln rho), in [0, ln d].
double von_neumann_entropy(const DensityMatrix& rho);

// S(rho_A) + S(rho_B) - S(rho_AB).
double mutual_information(const DensityMatrix& rho_ab);

// S(sigma||rho) = tr sigma (ln sigma - ln rho). Returns +infinity when a
// kernel direction of rho carries sigma-weight above 1e-8.
double relative_entropy(const DensityMatrix& sigma, const DensityMatrix& rho);

// F(sigma,rho) = [tr sqrt(sqrt(rho) sigma sqrt(rho))]^2, computed as
// (sum_k sqrt(mu_k))^2 over the eigenvalues mu_k of sqrt(rho) sigma sqrt(rho).
double fidelity(const DensityMatrix& sigma, const DensityMatrix& rho);

// D_B(sigma,rho) = 2 - 2 sqrt(F).
double bures_distance(const DensityMatrix& sigma, const DensityMatrix& rho);

// sum_i sqrt(tr sigma A_i^dag A_i) sqrt(tr rho A_i^dag A_i) for a complete
// measurement {A_i}; squares to at least F(sigma,rho) for every such set.
double measurement_fidelity_bound(const DensityMatrix& sigma, const DensityMatrix& rho,
                                  const std::vector<ComplexMatrix>& povm);

}  // namespace entmeas

#endif
