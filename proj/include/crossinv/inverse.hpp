#pragma once
#include "crossinv/cell_block.hpp"
#include "crossinv/covariance.hpp"
#include "crossinv/design.hpp"
#include "crossinv/spectral.hpp"

namespace crossinv {

// Coefficients of the closed-form inverse of the modified covariance,
// indexed by which Kronecker factor carries an averaging block:
// delta00 on I (x) I, delta01 on I (x) Jbar_h, delta10 on Jbar_g (x) I,
// delta11 on Jbar_g (x) Jbar_h.
struct VcheckCoefficients {
    double delta00 = 0.0;
    double delta01 = 0.0;
    double delta10 = 0.0;
    double delta11 = 0.0;
    Spectrum spectrum;
};

VcheckCoefficients vcheck_coefficients(const Design& d, const VarianceComponents& theta);

// Exact closed-form inverse of build_V_check: diagonal m_U/(lambda0 * m_c)
// plus the four-delta averaging kernel in BAR norm.
CellBlockMatrix vcheck_inverse(const Design& d, const VarianceComponents& theta);

// Two leading terms only; the kernel degenerates to a diagonal, so the
// result is block-diagonal over cells. Gap to vcheck_inverse shrinks as
// min(g, h) grows.
CellBlockMatrix vcheck_inverse_truncated(const Design& d, const VarianceComponents& theta);

// Exact inverse of V for balanced designs via the five-projector expansion.
// Throws std::invalid_argument on unbalanced designs. Equals vcheck_inverse
// there; kept as an independently coded path for cross-checking.
CellBlockMatrix balanced_inverse(const Design& d, const VarianceComponents& theta);

// Large-grid limit: (1/se2) I minus a per-cell averaging correction,
// block-diagonal over cells. Error decays like 1/min(g, h).
CellBlockMatrix asymptotic_inverse(const Design& d, const VarianceComponents& theta);

struct NeumannResult {
    CellBlockMatrix inverse;
    int order = 0;
    // The geometric error bound requires delta < 0.5; the series value is
    // still returned beyond that, only the guarantee is void.
    bool outside_theorem_hypothesis = false;
};

// Order-r series approximation sum_{l=0..r} (-se2)^l (Vcheck^-1 Idelta)^l
// Vcheck^-1, computed entirely in the compressed algebra. r = 0 returns
// vcheck_inverse.
NeumannResult neumann_inverse(const Design& d, const VarianceComponents& theta, int r);

// Exact dense inverse of V built by rank-one diagonal updates of the dense
// closed-form modified inverse; observations visited in lexicographic
// (i, j, k) order, cells already at m_U skipped. Throws numerical_error if
// an update denominator is not strictly positive.
Matrix sherman_morrison_inverse(const Design& d, const VarianceComponents& theta);

// Dense positive-definite factorization of V; the ground-truth oracle.
Matrix dense_inverse_oracle(const Design& d, const VarianceComponents& theta);

}  // namespace crossinv
