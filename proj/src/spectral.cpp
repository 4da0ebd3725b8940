#include "crossinv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace crossinv {

Spectrum eigenvalue_spectrum(const Design& d, const VarianceComponents& theta) {
    validate(theta);
    const double mu = static_cast<double>(d.m_U);
    Spectrum s;
    s.lambda0 = theta.sigma2_e;
    s.lambda7 = theta.sigma2_e + mu * theta.sigma2_gamma;
    s.lambda3 = s.lambda7 + d.h * mu * theta.sigma2_alpha;
    s.lambda5 = s.lambda7 + d.g * mu * theta.sigma2_beta;
    s.lambda1 = s.lambda3 + s.lambda5 - s.lambda7;
    s.mult0 = d.n - static_cast<std::int64_t>(d.num_cells());
    s.mult1 = 1;
    s.mult3 = d.g - 1;
    s.mult5 = d.h - 1;
    s.mult7 = (d.g - 1) * (d.h - 1);
    return s;
}

std::vector<double> spectrum_multiset(const Design& d, const VarianceComponents& theta) {
    const Spectrum s = eigenvalue_spectrum(d, theta);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(d.n));
    out.insert(out.end(), static_cast<std::size_t>(s.mult0), s.lambda0);
    out.insert(out.end(), static_cast<std::size_t>(s.mult7), s.lambda7);
    out.insert(out.end(), static_cast<std::size_t>(s.mult3), s.lambda3);
    out.insert(out.end(), static_cast<std::size_t>(s.mult5), s.lambda5);
    out.push_back(s.lambda1);
    std::sort(out.begin(), out.end());
    return out;
}

ContrastBasis contrast_basis(int k) {
    if (k < 2) throw std::invalid_argument("contrast basis needs k >= 2");
    ContrastBasis cb;
    cb.k = k;
    cb.vectors = Matrix::Zero(k, k - 1);
    for (int i = 1; i < k; ++i) {
        const double s = 1.0 / std::sqrt(static_cast<double>(i) * (i + 1));
        for (int r = 0; r < i; ++r) cb.vectors(r, i - 1) = s;
        cb.vectors(i, i - 1) = -static_cast<double>(i) * s;
    }
    return cb;
}

Projectors projectors(const Design& d) {
    const Matrix ig = Matrix::Identity(d.g, d.g);
    const Matrix ih = Matrix::Identity(d.h, d.h);
    const Matrix jg = Matrix::Constant(d.g, d.g, 1.0 / d.g);
    const Matrix jh = Matrix::Constant(d.h, d.h, 1.0 / d.h);
    Projectors p;
    p.p1 = cbm_from_kernel(d, Eigen::kroneckerProduct(jg, jh), Norm::Tilde);
    p.p3 = cbm_from_kernel(d, Eigen::kroneckerProduct(Matrix(ig - jg), jh), Norm::Tilde);
    p.p5 = cbm_from_kernel(d, Eigen::kroneckerProduct(jg, Matrix(ih - jh)), Norm::Tilde);
    p.p7 = cbm_from_kernel(d, Eigen::kroneckerProduct(Matrix(ig - jg), Matrix(ih - jh)),
                           Norm::Tilde);
    return p;
}

DiagonalizationReport verify_diagonalization(const Design& d,
                                             const VarianceComponents& theta,
                                             double tol) {
    const Spectrum s = eigenvalue_spectrum(d, theta);
    const Eigen::Index n = static_cast<Eigen::Index>(d.n);

    Vector tilde(n);
    Eigen::Index pos = 0;
    for (int c = 0; c < static_cast<int>(d.num_cells()); ++c) {
        const double v = 1.0 / std::sqrt(static_cast<double>(d.cells[static_cast<std::size_t>(c)]));
        for (int k = 0; k < d.cells[static_cast<std::size_t>(c)]; ++k) tilde(pos++) = v;
    }
    const Matrix vcheck = cbm_to_dense(build_V_check(d, theta));
    const Matrix t = static_cast<double>(d.m_U) *
                     (tilde.asDiagonal() * vcheck * tilde.asDiagonal());

    const Projectors p = projectors(d);
    Matrix expansion = s.lambda0 * Matrix::Identity(n, n);
    expansion += (s.lambda1 - s.lambda0) * cbm_to_dense(p.p1);
    expansion += (s.lambda3 - s.lambda0) * cbm_to_dense(p.p3);
    expansion += (s.lambda5 - s.lambda0) * cbm_to_dense(p.p5);
    expansion += (s.lambda7 - s.lambda0) * cbm_to_dense(p.p7);

    DiagonalizationReport rep;
    rep.residual_max = (t - expansion).cwiseAbs().maxCoeff();

    Eigen::SelfAdjointEigenSolver<Matrix> es(t, Eigen::EigenvaluesOnly);
    const Vector dense_eigs = es.eigenvalues();
    const std::vector<double> closed = spectrum_multiset(d, theta);
    double mismatch = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        mismatch = std::max(mismatch,
                            std::abs(dense_eigs(i) - closed[static_cast<std::size_t>(i)]));
    rep.eig_mismatch = mismatch;
    rep.ok = rep.residual_max <= tol && rep.eig_mismatch <= 1e-8 * s.lambda1;
    return rep;
}

}  // namespace crossinv
