#pragma once
#include <cstdint>

#include "crossinv/cell_block.hpp"
#include "crossinv/design.hpp"

namespace crossinv {

// Variances of the row, column, interaction, and observation-level effects.
// All nonnegative; sigma2_e must be strictly positive so the covariance is
// positive definite. sigma2_gamma = 0 selects the no-interaction model.
struct VarianceComponents {
    double sigma2_alpha = 5.0;
    double sigma2_beta = 7.0;
    double sigma2_gamma = 3.0;
    double sigma2_e = 4.0;
};

void validate(const VarianceComponents& theta);

// Random-effect covariance D: unnormalized all-ones blocks weighted by the
// Kronecker pattern sa2*(I_g (x) J_h) + sb2*(J_g (x) I_h) + sg2*I_gh.
// BAR kernel is M S M with S that gh x gh pattern; diag part zero.
CellBlockMatrix build_D(const Design& d, const VarianceComponents& theta);

// V = sigma2_e * I_n + D.
CellBlockMatrix build_V(const Design& d, const VarianceComponents& theta);

// Modified covariance: observation noise rescaled per cell to
// sigma2_e * m_c / m_U, which makes the whole matrix diagonalizable in
// closed form. Equal to V exactly when the design is balanced.
CellBlockMatrix build_V_check(const Design& d, const VarianceComponents& theta);

// Cell weights w_c = 1 - m_c/m_U of the diagonal gap V - V_check, so that
// V = V_check + sigma2_e * blockdiag(w_c * I_{m_c}).
Vector build_I_delta(const Design& d);

// One draw of the response vector y = mu + row + column + interaction +
// noise effects, all independent zero-mean Gaussians with the stated
// variances. Deterministic given the seed.
Vector sample_responses(const Design& d, const VarianceComponents& theta,
                        double mu, std::uint64_t seed);

}  // namespace crossinv
