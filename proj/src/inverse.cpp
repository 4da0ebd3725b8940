#include "crossinv/inverse.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <unsupported/Eigen/KroneckerProduct>

namespace crossinv {

VcheckCoefficients vcheck_coefficients(const Design& d, const VarianceComponents& theta) {
    VcheckCoefficients c;
    c.spectrum = eigenvalue_spectrum(d, theta);
    const Spectrum& s = c.spectrum;
    c.delta00 = 1.0 / s.lambda7 - 1.0 / s.lambda0;
    c.delta01 = 1.0 / s.lambda3 - 1.0 / s.lambda7;
    c.delta10 = 1.0 / s.lambda5 - 1.0 / s.lambda7;
    c.delta11 = 1.0 / s.lambda1 - 1.0 / s.lambda3 - 1.0 / s.lambda5 + 1.0 / s.lambda7;
    return c;
}

CellBlockMatrix vcheck_inverse(const Design& d, const VarianceComponents& theta) {
    const VcheckCoefficients c = vcheck_coefficients(d, theta);
    const double mu = static_cast<double>(d.m_U);
    const Eigen::Index gh = static_cast<Eigen::Index>(d.num_cells());

    Vector diag(gh);
    for (Eigen::Index k = 0; k < gh; ++k)
        diag(k) = mu / (c.spectrum.lambda0 * d.cells[static_cast<std::size_t>(k)]);

    Matrix kernel(gh, gh);
    for (int i = 0; i < d.g; ++i)
        for (int j = 0; j < d.h; ++j) {
            const Eigen::Index a = static_cast<Eigen::Index>(d.flat_index(i, j));
            for (int i2 = 0; i2 < d.g; ++i2)
                for (int j2 = 0; j2 < d.h; ++j2) {
                    const Eigen::Index b = static_cast<Eigen::Index>(d.flat_index(i2, j2));
                    double v = c.delta11 / (d.g * d.h);
                    if (i == i2) v += c.delta01 / d.h;
                    if (j == j2) v += c.delta10 / d.g;
                    if (a == b) v += c.delta00;
                    kernel(a, b) = mu * v;
                }
        }
    return cbm_make(d, std::move(diag), std::move(kernel), Norm::Bar);
}

CellBlockMatrix vcheck_inverse_truncated(const Design& d, const VarianceComponents& theta) {
    const VcheckCoefficients c = vcheck_coefficients(d, theta);
    const double mu = static_cast<double>(d.m_U);
    const Eigen::Index gh = static_cast<Eigen::Index>(d.num_cells());
    Vector diag(gh);
    for (Eigen::Index k = 0; k < gh; ++k)
        diag(k) = mu / (c.spectrum.lambda0 * d.cells[static_cast<std::size_t>(k)]);
    Matrix kernel = (mu * c.delta00) * Matrix::Identity(gh, gh);
    return cbm_make(d, std::move(diag), std::move(kernel), Norm::Bar);
}

CellBlockMatrix balanced_inverse(const Design& d, const VarianceComponents& theta) {
    if (!d.balanced())
        throw std::invalid_argument("balanced inverse requires equal cell counts");
    const Spectrum s = eigenvalue_spectrum(d, theta);
    const double m = static_cast<double>(d.m_U);
    const Eigen::Index gh = static_cast<Eigen::Index>(d.num_cells());

    const Matrix ig = Matrix::Identity(d.g, d.g);
    const Matrix ih = Matrix::Identity(d.h, d.h);
    const Matrix jg = Matrix::Constant(d.g, d.g, 1.0 / d.g);
    const Matrix jh = Matrix::Constant(d.h, d.h, 1.0 / d.h);
    const Matrix cg = ig - jg;
    const Matrix ch = ih - jh;

    Matrix kernel = -(1.0 / s.lambda0) * Matrix::Identity(gh, gh);
    kernel += (1.0 / s.lambda7) * Eigen::kroneckerProduct(cg, ch);
    kernel += (1.0 / s.lambda3) * Eigen::kroneckerProduct(cg, jh);
    kernel += (1.0 / s.lambda5) * Eigen::kroneckerProduct(jg, ch);
    kernel += (1.0 / s.lambda1) * Eigen::kroneckerProduct(jg, jh);
    kernel *= m;

    Vector diag = Vector::Constant(gh, 1.0 / s.lambda0);
    return cbm_make(d, std::move(diag), std::move(kernel), Norm::Bar);
}

CellBlockMatrix asymptotic_inverse(const Design& d, const VarianceComponents& theta) {
    validate(theta);
    const Eigen::Index gh = static_cast<Eigen::Index>(d.num_cells());
    const double se2 = theta.sigma2_e;
    const double sg2 = theta.sigma2_gamma;
    Vector kdiag(gh);
    for (Eigen::Index c = 0; c < gh; ++c) {
        const double mc = static_cast<double>(d.cells[static_cast<std::size_t>(c)]);
        kdiag(c) = -sg2 * mc * mc / (se2 * (se2 + mc * sg2));
    }
    return cbm_make(d, Vector::Constant(gh, 1.0 / se2), Matrix(kdiag.asDiagonal()),
                    Norm::Bar);
}

NeumannResult neumann_inverse(const Design& d, const VarianceComponents& theta, int r) {
    if (r < 0) throw std::invalid_argument("series order must be nonnegative");
    NeumannResult out;
    out.order = r;
    out.outside_theorem_hypothesis = d.delta >= 0.5;

    const CellBlockMatrix vci = vcheck_inverse(d, theta);
    out.inverse = vci;
    if (r == 0) return out;

    const Vector w = build_I_delta(d);
    const CellBlockMatrix t = cbm_cell_diag_sandwich(vci, w, Side::Right);
    CellBlockMatrix term = vci;
    for (int l = 1; l <= r; ++l) {
        term = cbm_scale(cbm_mul(t, term), -theta.sigma2_e);
        out.inverse = cbm_add(out.inverse, term);
    }
    return out;
}

Matrix sherman_morrison_inverse(const Design& d, const VarianceComponents& theta) {
    Matrix w = cbm_to_dense(vcheck_inverse(d, theta));
    const std::vector<std::int64_t> off = cell_offsets(d);
    const double se2 = theta.sigma2_e;
    Vector col(w.rows());
    for (int i = 0; i < d.g; ++i)
        for (int j = 0; j < d.h; ++j) {
            const int mc = d.cell(i, j);
            if (mc == d.m_U) continue;
            const double s = se2 * (1.0 - static_cast<double>(mc) / d.m_U);
            const std::int64_t base = off[d.flat_index(i, j)];
            for (int k = 0; k < mc; ++k) {
                const Eigen::Index p = static_cast<Eigen::Index>(base + k);
                const double denom = 1.0 + s * w(p, p);
                if (!(denom > 0.0) || !std::isfinite(denom))
                    throw numerical_error("rank-one update denominator not positive");
                col = w.col(p);
                w.noalias() -= (s / denom) * col * col.transpose();
            }
        }
    return w;
}

Matrix dense_inverse_oracle(const Design& d, const VarianceComponents& theta) {
    const Matrix v = cbm_to_dense(build_V(d, theta));
    Eigen::LLT<Matrix> llt(v);
    if (llt.info() != Eigen::Success)
        throw numerical_error("dense factorization of the covariance failed");
    return llt.solve(Matrix::Identity(v.rows(), v.cols()));
}

}  // namespace crossinv
