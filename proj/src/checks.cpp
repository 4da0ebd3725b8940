#include "crossinv/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace crossinv {

double Lemma1Report::worst() const {
    return *std::max_element(max_discrepancy.begin(), max_discrepancy.end());
}

double Lemma2Report::worst() const {
    return std::max(bilinearity,
                    *std::max_element(products.begin(), products.end()));
}

namespace {

double draw_uniform(std::mt19937_64& eng, double lo, double hi) {
    const double u = static_cast<double>(eng() >> 11) * 0x1p-53;
    return lo + (hi - lo) * u;
}

Matrix random_matrix(std::mt19937_64& eng, Eigen::Index rows, Eigen::Index cols,
                     double lo, double hi) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = draw_uniform(eng, lo, hi);
    return m;
}

Vector random_vector(std::mt19937_64& eng, Eigen::Index size, double lo, double hi) {
    Vector v(size);
    for (Eigen::Index i = 0; i < size; ++i) v(i) = draw_uniform(eng, lo, hi);
    return v;
}

std::vector<int> singleton_parts(int count) { return std::vector<int>(count, 1); }

// Dense block matrix of all-ones blocks J_{m_a x m_b} scaled by
// (m_a m_b)^(-power): power 0.5 is the tilde norm, 1 the bar norm.
Matrix dense_ones_blocks(const Design& d, double power) {
    const Eigen::Index n = static_cast<Eigen::Index>(d.n);
    Matrix out(n, n);
    const std::vector<std::int64_t> off = cell_offsets(d);
    const int gh = static_cast<int>(d.num_cells());
    for (int a = 0; a < gh; ++a)
        for (int b = 0; b < gh; ++b) {
            const double ma = d.cells[static_cast<std::size_t>(a)];
            const double mb = d.cells[static_cast<std::size_t>(b)];
            out.block(off[a], off[b], static_cast<Eigen::Index>(ma),
                      static_cast<Eigen::Index>(mb))
                .setConstant(std::pow(ma * mb, -power));
        }
    return out;
}

// Random positive weights assigned per distinct cell size, so equal sizes
// share a value (the weights act as a scalar function of the size).
std::map<int, double> random_size_function(const Design& d, std::mt19937_64& eng) {
    std::map<int, double> f;
    for (int m : d.cells) f.emplace(m, 0.0);
    for (auto& [m, v] : f) v = draw_uniform(eng, 0.5, 2.0);
    return f;
}

Vector per_observation(const Design& d, const std::map<int, double>& f) {
    Vector out(static_cast<Eigen::Index>(d.n));
    Eigen::Index pos = 0;
    for (int m : d.cells) {
        const double v = f.at(m);
        for (int k = 0; k < m; ++k) out(pos++) = v;
    }
    return out;
}

Vector per_cell(const Design& d, const std::map<int, double>& f) {
    Vector out(static_cast<Eigen::Index>(d.num_cells()));
    for (Eigen::Index c = 0; c < out.size(); ++c)
        out(c) = f.at(d.cells[static_cast<std::size_t>(c)]);
    return out;
}

Vector cell_size_vector(const Design& d) {
    Vector m(static_cast<Eigen::Index>(d.num_cells()));
    for (Eigen::Index c = 0; c < m.size(); ++c)
        m(c) = static_cast<double>(d.cells[static_cast<std::size_t>(c)]);
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

Lemma1Report check_lemma1(const Design& d, std::uint64_t seed) {
    std::mt19937_64 eng(mix_seed(seed, {0x11}));
    const int g = d.g, h = d.h;
    const int gh = static_cast<int>(d.num_cells());
    const std::vector<int> cell_parts = d.cells;
    const std::vector<int> one{1};

    const Matrix p = random_matrix(eng, g, g, -1.0, 1.0);
    const Matrix q = random_matrix(eng, h, h, -1.0, 1.0);
    const Matrix r = random_matrix(eng, g, g, -1.0, 1.0);
    const Matrix s = random_matrix(eng, h, h, -1.0, 1.0);
    const Vector a = random_vector(eng, g, -1.0, 1.0);
    const Vector b = random_vector(eng, h, -1.0, 1.0);
    const std::map<int, double> f = random_size_function(d, eng);

    const Matrix pq = Eigen::kroneckerProduct(p, q);
    const Matrix rs = Eigen::kroneckerProduct(r, s);
    const Matrix jtilde = dense_ones_blocks(d, 0.5);
    const Matrix jbar = dense_ones_blocks(d, 1.0);
    const Matrix pq_jtilde = khatri_rao_dense(pq, singleton_parts(gh), singleton_parts(gh),
                                              jtilde, cell_parts, cell_parts);
    const Matrix rs_jtilde = khatri_rao_dense(rs, singleton_parts(gh), singleton_parts(gh),
                                              jtilde, cell_parts, cell_parts);
    const Matrix pq_jbar = khatri_rao_dense(pq, singleton_parts(gh), singleton_parts(gh),
                                            jbar, cell_parts, cell_parts);
    const Matrix rs_jbar = khatri_rao_dense(rs, singleton_parts(gh), singleton_parts(gh),
                                            jbar, cell_parts, cell_parts);
    const Vector m = cell_size_vector(d);
    const Vector f_cell = per_cell(d, f);
    const Vector f_obs = per_observation(d, f);

    Lemma1Report rep;

    // Row-partitioned vector against a tilde block matrix.
    {
        Vector tilde_ones(static_cast<Eigen::Index>(d.n));
        Eigen::Index pos = 0;
        for (int mc : d.cells) {
            const double v = 1.0 / std::sqrt(static_cast<double>(mc));
            for (int k = 0; k < mc; ++k) tilde_ones(pos++) = v;
        }
        const Matrix ab = Eigen::kroneckerProduct(a, b);
        const Matrix u = khatri_rao_dense(ab, singleton_parts(gh), one, tilde_ones,
                                          cell_parts, one);
        const Matrix lhs = u.transpose() * pq_jtilde;

        const Vector left = p.transpose() * a;   // entries of a^T P
        const Vector right = q.transpose() * b;  // entries of b^T Q
        Matrix rhs(1, d.n);
        pos = 0;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < h; ++j) {
                const int mc = d.cell(i, j);
                const double v = left(i) * right(j) / std::sqrt(static_cast<double>(mc));
                for (int k = 0; k < mc; ++k) rhs(0, pos++) = v;
            }
        rep.max_discrepancy[0] = max_abs_diff(lhs, rhs);
    }

    // Tilde-normalized products compose like plain matrix products.
    rep.max_discrepancy[1] = max_abs_diff(
        pq_jtilde * rs_jtilde,
        cbm_to_dense(cbm_from_kernel(d, Matrix(pq * rs), Norm::Tilde)));

    // Bar-normalized products pick up the inverse size weighting.
    rep.max_discrepancy[2] = max_abs_diff(
        pq_jbar * rs_jbar,
        cbm_to_dense(cbm_from_kernel(
            d, Matrix(pq * m.cwiseInverse().asDiagonal() * rs), Norm::Bar)));

    // Column scaling by f(m) folds into the kernel.
    rep.max_discrepancy[3] = max_abs_diff(
        Matrix(pq_jbar * f_obs.asDiagonal()) * rs_jbar,
        cbm_to_dense(cbm_from_kernel(
            d,
            Matrix(pq * f_cell.asDiagonal() * m.cwiseInverse().asDiagonal() * rs),
            Norm::Bar)));

    // Row scaling by f(m) stays outside the product.
    rep.max_discrepancy[4] = max_abs_diff(
        Matrix(f_obs.asDiagonal() * pq_jbar) * rs_jbar,
        cbm_to_dense(cbm_from_kernel(
            d,
            Matrix(f_cell.asDiagonal() * pq * m.cwiseInverse().asDiagonal() * rs),
            Norm::Bar)));

    return rep;
}

Lemma2Report check_lemma2(const Design& d, std::uint64_t seed) {
    std::mt19937_64 eng(mix_seed(seed, {0x22}));
    const int g = d.g, h = d.h;
    const int gh = static_cast<int>(d.num_cells());
    const Eigen::Index n = static_cast<Eigen::Index>(d.n);
    const std::vector<int> cell_parts = d.cells;
    const std::vector<int> ones_gh = singleton_parts(gh);
    const std::vector<int> one{1};
    const std::vector<std::int64_t> off = cell_offsets(d);

    const Vector a = random_vector(eng, g, -1.0, 1.0);
    const Vector b = random_vector(eng, h, -1.0, 1.0);
    const Vector dvec = random_vector(eng, g, -1.0, 1.0);
    const Vector e = random_vector(eng, h, -1.0, 1.0);
    const Vector c = random_vector(eng, n, -1.0, 1.0);
    const Vector fv = random_vector(eng, n, -1.0, 1.0);
    const Matrix p = random_matrix(eng, g, g, -1.0, 1.0);
    const Matrix p1 = random_matrix(eng, g, g, -1.0, 1.0);
    const Matrix q = random_matrix(eng, h, h, -1.0, 1.0);
    const Matrix q1 = random_matrix(eng, h, h, -1.0, 1.0);
    const Matrix rmat = random_matrix(eng, n, n, -1.0, 1.0);
    const Matrix rmat1 = random_matrix(eng, n, n, -1.0, 1.0);

    const auto kr_cell = [&](const Matrix& small, const Matrix& big) {
        return khatri_rao_dense(small, ones_gh, ones_gh, big, cell_parts, cell_parts);
    };
    const auto kr_vec = [&](const Vector& gv, const Vector& hv, const Vector& obs) {
        return khatri_rao_dense(Matrix(Eigen::kroneckerProduct(gv, hv)), ones_gh, one,
                                Matrix(obs), cell_parts, one);
    };

    Lemma2Report rep;

    {
        const Matrix pq = Eigen::kroneckerProduct(p, q);
        double worst = max_abs_diff(
            kr_cell(Eigen::kroneckerProduct(p, Matrix(q + q1)), rmat),
            kr_cell(pq, rmat) + kr_cell(Eigen::kroneckerProduct(p, q1), rmat));
        worst = std::max(worst, max_abs_diff(kr_cell(Eigen::kroneckerProduct(
                                                         Matrix(p - p1), q),
                                                     rmat),
                                             kr_cell(pq, rmat) -
                                                 kr_cell(Eigen::kroneckerProduct(p1, q),
                                                         rmat)));
        worst = std::max(worst, max_abs_diff(kr_cell(pq, Matrix(rmat + rmat1)),
                                             kr_cell(pq, rmat) + kr_cell(pq, rmat1)));
        rep.bilinearity = worst;
    }

    const Matrix u = kr_vec(a, b, c);
    const Matrix v = kr_vec(dvec, e, fv);

    // Inner product collapses to cellwise dot products.
    {
        const double lhs = (u.transpose() * v)(0, 0);
        double rhs = 0.0;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < h; ++j) {
                const int cell = d.flat_index(i, j);
                const int mc = d.cells[static_cast<std::size_t>(cell)];
                const double dot =
                    c.segment(off[cell], mc).dot(fv.segment(off[cell], mc));
                rhs += a(i) * b(j) * dvec(i) * e(j) * dot;
            }
        rep.products[0] = std::abs(lhs - rhs);
    }

    // Outer product factors into rank-one Kronecker parts.
    rep.products[1] = max_abs_diff(
        u * v.transpose(),
        kr_cell(Eigen::kroneckerProduct(Matrix(a * dvec.transpose()),
                                        Matrix(b * e.transpose())),
                Matrix(c * fv.transpose())));

    // Row vector times block matrix, blockwise closed form.
    {
        const Matrix pq_r = kr_cell(Eigen::kroneckerProduct(p, q), rmat);
        const Matrix lhs = u.transpose() * pq_r;
        Matrix rhs(1, n);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < h; ++j) {
                const int cell = d.flat_index(i, j);
                const int mc = d.cells[static_cast<std::size_t>(cell)];
                Matrix acc = Matrix::Zero(1, mc);
                for (int si = 0; si < g; ++si)
                    for (int tj = 0; tj < h; ++tj) {
                        const int sc = d.flat_index(si, tj);
                        const int msc = d.cells[static_cast<std::size_t>(sc)];
                        acc += a(si) * b(tj) * p(si, i) * q(tj, j) *
                               c.segment(off[sc], msc).transpose() *
                               rmat.block(off[sc], off[cell], msc, mc);
                    }
                rhs.block(0, off[cell], 1, mc) = acc;
            }
        rep.products[2] = max_abs_diff(lhs, rhs);
    }

    // Full quadratic form.
    {
        const Matrix pq_r = kr_cell(Eigen::kroneckerProduct(p, q), rmat);
        const double lhs = (u.transpose() * pq_r * v)(0, 0);
        double rhs = 0.0;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < h; ++j) {
                const int cij = d.flat_index(i, j);
                const int mij = d.cells[static_cast<std::size_t>(cij)];
                for (int si = 0; si < g; ++si)
                    for (int tj = 0; tj < h; ++tj) {
                        const int cst = d.flat_index(si, tj);
                        const int mst = d.cells[static_cast<std::size_t>(cst)];
                        rhs += a(i) * b(j) * dvec(si) * e(tj) * p(i, si) * q(j, tj) *
                               (c.segment(off[cij], mij).transpose() *
                                rmat.block(off[cij], off[cst], mij, mst) *
                                fv.segment(off[cst], mst))(0, 0);
                    }
            }
        rep.products[3] = std::abs(lhs - rhs);
    }

    return rep;
}

Lemma3Report check_lemma3(int dimension, std::uint64_t seed) {
    if (dimension < 1) throw std::invalid_argument("dimension must be positive");
    std::mt19937_64 eng(mix_seed(seed, {0x33}));
    const Eigen::Index n = dimension;

    Lemma3Report rep;
    {
        const Matrix cmat = random_matrix(eng, n, n, 0.0, 1.0);
        const Matrix mask = random_matrix(eng, n, n, 0.0, 1.0);
        const Matrix amat = cmat.cwiseProduct(mask);
        const Matrix bmat = random_matrix(eng, n, n, 0.0, 1.0);
        rep.max_violation = (amat * bmat - cmat * bmat).maxCoeff();
        rep.inequality_ok = rep.max_violation <= 1e-12;
    }
    {
        const Matrix amat = random_matrix(eng, n, n, 0.0, 1.0);
        const Matrix cmat = amat + random_matrix(eng, n, n, 0.1, 1.0);
        const Matrix bmat = random_matrix(eng, n, n, 0.1, 1.0);
        rep.strict_ok = (cmat * bmat - amat * bmat).minCoeff() > 0.0;
    }
    return rep;
}

Lemma4Report check_lemma4(const Design& d, int l_max) {
    if (l_max < 1) throw std::invalid_argument("power bound needs l_max >= 1");
    const Matrix ig = Matrix::Identity(d.g, d.g);
    const Matrix ih = Matrix::Identity(d.h, d.h);
    const Matrix jg = Matrix::Constant(d.g, d.g, 1.0 / d.g);
    const Matrix jh = Matrix::Constant(d.h, d.h, 1.0 / d.h);

    const Matrix row_term =
        cbm_to_dense(cbm_from_kernel(d, Eigen::kroneckerProduct(jg, ih), Norm::Bar));
    const Matrix col_term =
        cbm_to_dense(cbm_from_kernel(d, Eigen::kroneckerProduct(ig, jh), Norm::Bar));
    const Matrix both_term =
        cbm_to_dense(cbm_from_kernel(d, Eigen::kroneckerProduct(jg, jh), Norm::Bar));
    const Matrix t = row_term + col_term + both_term;

    Lemma4Report rep;
    rep.l_max = l_max;
    Matrix power = t;
    double coeff3 = 1.0;  // (3^l - 2) / m_L^(l-1) for l = 1
    double coeff12 = 1.0;
    for (int l = 1; l <= l_max; ++l) {
        if (l > 1) {
            power = power * t;
            coeff12 /= d.m_L;
            coeff3 = (std::pow(3.0, l) - 2.0) / std::pow(static_cast<double>(d.m_L), l - 1);
        }
        const Matrix bound = coeff12 * (row_term + col_term) + coeff3 * both_term;
        rep.max_violation = std::max(rep.max_violation, (power - bound).maxCoeff());
    }
    rep.ok = rep.max_violation <= 1e-12;
    return rep;
}

Lemma5Report check_lemma5(double d2, double epsilon) {
    if (!(d2 > 1.0)) throw std::invalid_argument("d2 must exceed 1");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1)");

    Lemma5Report rep;
    const double logd2 = std::log(d2);
    rep.g_epsilon = std::exp(logd2 * logd2 / (epsilon * epsilon));
    rep.g_lo = std::max(2.0, rep.g_epsilon * (1.0 + 1e-10));
    rep.g_hi = std::max(1e6, rep.g_lo * 1e4);

    // Margins in log scale: lower >= 0 iff g^(-1-eps) <= d2^sqrt(log g)/g,
    // upper >= 0 iff d2^sqrt(log g)/g <= g^(-1+eps).
    const int points = 200;
    rep.grid_points = points;
    double lower = std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    const double llo = std::log(rep.g_lo), lhi = std::log(rep.g_hi);
    for (int k = 0; k < points; ++k) {
        const double logg = llo + (lhi - llo) * k / (points - 1);
        const double root = std::sqrt(logg) * logd2;
        lower = std::min(lower, root + epsilon * logg);
        upper = std::min(upper, epsilon * logg - root);
    }
    // Lower bound additionally holds on all of g > 1.
    for (int k = 1; k <= 64; ++k) {
        const double logg = std::log(rep.g_lo) * k / 64.0;
        if (logg <= 0.0) continue;
        lower = std::min(lower, std::sqrt(logg) * logd2 + epsilon * logg);
    }
    rep.lower_margin = lower;
    rep.upper_margin = upper;
    rep.ok = lower >= 0.0 && upper >= -1e-12;
    return rep;
}

}  // namespace crossinv
