#pragma once
#include <cstdint>
#include <vector>

#include "crossinv/cell_block.hpp"
#include "crossinv/covariance.hpp"
#include "crossinv/design.hpp"

namespace crossinv {

// Closed-form eigenvalues of m_U * Itilde * Vcheck * Itilde together with
// their multiplicities. lambda0 acts on the within-cell space, lambda1 on
// the grand mean, lambda3 on row contrasts, lambda5 on column contrasts,
// lambda7 on doubly centered cell means.
struct Spectrum {
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double lambda3 = 0.0;
    double lambda5 = 0.0;
    double lambda7 = 0.0;
    std::int64_t mult0 = 0;  // n - gh
    int mult1 = 0;           // 1
    int mult3 = 0;           // g - 1
    int mult5 = 0;           // h - 1
    int mult7 = 0;           // (g - 1)(h - 1)
};

Spectrum eigenvalue_spectrum(const Design& d, const VarianceComponents& theta);

// All n eigenvalues with multiplicity, ascending.
std::vector<double> spectrum_multiset(const Design& d, const VarianceComponents& theta);

// k-1 orthonormal length-k vectors (columns), each orthogonal to the
// all-ones vector. Helmert construction: column i has i leading entries
// 1/sqrt(i(i+1)), entry i+1 equal to -i/sqrt(i(i+1)), zeros after.
struct ContrastBasis {
    int k = 0;
    Matrix vectors;  // k rows, k-1 columns
};

ContrastBasis contrast_basis(int k);

// Orthogonal projectors in TILDE norm onto the grand-mean (p1),
// row-contrast (p3), column-contrast (p5), and doubly centered cell-mean
// (p7) spaces. Idempotent, mutually annihilating, traces
// 1, g-1, h-1, (g-1)(h-1); their sum is the cell-mean projector.
struct Projectors {
    CellBlockMatrix p1, p3, p5, p7;
};

Projectors projectors(const Design& d);

// residual_max: max-abs entry of m_U * Itilde * Vcheck * Itilde minus its
//   projector expansion lambda1*P1 + lambda3*P3 + lambda5*P5 + lambda7*P7
//   + lambda0*(I - sum P), formed densely.
// eig_mismatch: max distance between sorted dense eigenvalues and the
//   closed-form multiset.
// ok applies tol to residual_max and a relative 1e-8*lambda1 tolerance to
// eig_mismatch.
struct DiagonalizationReport {
    double residual_max = 0.0;
    double eig_mismatch = 0.0;
    bool ok = false;
};

DiagonalizationReport verify_diagonalization(const Design& d,
                                             const VarianceComponents& theta,
                                             double tol = 1e-10);

}  // namespace crossinv
