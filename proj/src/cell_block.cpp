#include "crossinv/cell_block.hpp"

#include <cmath>
#include <numeric>

namespace crossinv {

namespace {

void require_same_design(const CellBlockMatrix& a, const CellBlockMatrix& b) {
    if (!(a.design == b.design))
        throw std::invalid_argument("cell-block: operands live on different designs");
}

Vector cell_sizes(const Design& d) {
    Vector m(d.num_cells());
    for (int c = 0; c < d.num_cells(); ++c) m[c] = d.cells[c];
    return m;
}

}  // namespace

CellBlockMatrix cbm_zero(const Design& d, Norm norm) {
    const int gh = d.num_cells();
    return {d, Vector::Zero(gh), Matrix::Zero(gh, gh), norm};
}

CellBlockMatrix cbm_identity(const Design& d, Norm norm) {
    const int gh = d.num_cells();
    return {d, Vector::Ones(gh), Matrix::Zero(gh, gh), norm};
}

CellBlockMatrix cbm_make(const Design& d, Vector diag, Matrix kernel, Norm norm) {
    const int gh = d.num_cells();
    if (diag.size() != gh || kernel.rows() != gh || kernel.cols() != gh)
        throw std::invalid_argument("cell-block: diag or kernel size mismatch");
    return {d, std::move(diag), std::move(kernel), norm};
}

CellBlockMatrix cbm_from_kernel(const Design& d, Matrix kernel, Norm norm) {
    return cbm_make(d, Vector::Zero(d.num_cells()), std::move(kernel), norm);
}

CellBlockMatrix cbm_convert(const CellBlockMatrix& a, Norm target) {
    if (a.norm == target) return a;
    const Vector m = cell_sizes(a.design);
    const Vector sqrt_m = m.cwiseSqrt();
    CellBlockMatrix out = a;
    out.norm = target;
    if (target == Norm::Bar)  // TILDE -> BAR: kernel *= sqrt(m_a m_b)
        out.kernel = sqrt_m.asDiagonal() * a.kernel * sqrt_m.asDiagonal();
    else  // BAR -> TILDE
        out.kernel = sqrt_m.cwiseInverse().asDiagonal() * a.kernel *
                     sqrt_m.cwiseInverse().asDiagonal();
    return out;
}

CellBlockMatrix cbm_add(const CellBlockMatrix& a, const CellBlockMatrix& b) {
    require_same_design(a, b);
    if (a.norm != b.norm)
        throw std::invalid_argument("cell-block: addition requires a common norm");
    return {a.design, a.diag + b.diag, a.kernel + b.kernel, a.norm};
}

CellBlockMatrix cbm_scale(const CellBlockMatrix& a, double s) {
    return {a.design, s * a.diag, s * a.kernel, a.norm};
}

CellBlockMatrix cbm_add_scaled_identity(const CellBlockMatrix& a, double s) {
    CellBlockMatrix out = a;
    out.diag.array() += s;
    return out;
}

CellBlockMatrix cbm_mul(const CellBlockMatrix& a_in, const CellBlockMatrix& b_in) {
    require_same_design(a_in, b_in);
    const CellBlockMatrix a = cbm_convert(a_in, Norm::Bar);
    const CellBlockMatrix b = cbm_convert(b_in, Norm::Bar);
    const Vector m = cell_sizes(a.design);

    CellBlockMatrix out = cbm_zero(a.design, Norm::Bar);
    out.diag = a.diag.cwiseProduct(b.diag);
    // A diagonal kernel acts as a row or column rescale, so skip the dense
    // kernel product in that case. This matters for the block-diagonal
    // approximate inverses on large grids.
    if (b.kernel.isDiagonal(0.0))
        out.kernel = a.kernel * b.kernel.diagonal().cwiseQuotient(m).asDiagonal();
    else if (a.kernel.isDiagonal(0.0))
        out.kernel = a.kernel.diagonal().cwiseQuotient(m).asDiagonal() * b.kernel;
    else
        out.kernel = a.kernel * (m.cwiseInverse().asDiagonal() * b.kernel);
    out.kernel += a.diag.asDiagonal() * b.kernel;
    out.kernel += a.kernel * b.diag.asDiagonal();
    return out;
}

CellBlockMatrix cbm_cell_diag_sandwich(const CellBlockMatrix& a, const Vector& w,
                                       Side side) {
    if (w.size() != a.design.num_cells())
        throw std::invalid_argument("cell-block: weight vector length mismatch");
    CellBlockMatrix out = a;
    switch (side) {
        case Side::Left:
            out.diag = w.cwiseProduct(a.diag);
            out.kernel = w.asDiagonal() * a.kernel;
            break;
        case Side::Right:
            out.diag = a.diag.cwiseProduct(w);
            out.kernel = a.kernel * w.asDiagonal();
            break;
        case Side::Both:
            out.diag = w.cwiseProduct(a.diag).cwiseProduct(w);
            out.kernel = w.asDiagonal() * a.kernel * w.asDiagonal();
            break;
    }
    return out;
}

Vector cbm_matvec(const CellBlockMatrix& a, const Vector& x) {
    const Design& d = a.design;
    if (x.size() != d.n)
        throw std::invalid_argument("cell-block: vector length mismatch");
    const auto off = cell_offsets(d);
    const int gh = d.num_cells();

    // t_b = scaled sum of x over cell b; the block structure turns the dense
    // product into one gh x gh matvec plus per-cell broadcasts.
    Vector t(gh);
    for (int b = 0; b < gh; ++b) {
        const double sum = x.segment(off[b], d.cells[b]).sum();
        t[b] = (a.norm == Norm::Bar) ? sum / d.cells[b] : sum / std::sqrt(double(d.cells[b]));
    }
    const Vector s = a.kernel * t;

    Vector y(d.n);
    for (int c = 0; c < gh; ++c) {
        const double scale =
            (a.norm == Norm::Bar) ? s[c] / d.cells[c] : s[c] / std::sqrt(double(d.cells[c]));
        y.segment(off[c], d.cells[c]) =
            a.diag[c] * x.segment(off[c], d.cells[c]).array() + scale;
    }
    return y;
}

Matrix cbm_to_dense(const CellBlockMatrix& a) {
    const Design& d = a.design;
    const auto off = cell_offsets(d);
    Matrix out = Matrix::Zero(d.n, d.n);
    for (int r = 0; r < d.num_cells(); ++r) {
        for (int c = 0; c < d.num_cells(); ++c) {
            const double denom = (a.norm == Norm::Bar)
                                     ? double(d.cells[r]) * d.cells[c]
                                     : std::sqrt(double(d.cells[r]) * d.cells[c]);
            out.block(off[r], off[c], d.cells[r], d.cells[c])
                .setConstant(a.kernel(r, c) / denom);
        }
        out.block(off[r], off[r], d.cells[r], d.cells[r]).diagonal().array() +=
            a.diag[r];
    }
    return out;
}

CellBlockMatrix cbm_inverse(const CellBlockMatrix& a_in) {
    const CellBlockMatrix a = cbm_convert(a_in, Norm::Bar);
    for (int c = 0; c < a.design.num_cells(); ++c)
        if (a.diag[c] == 0.0)
            throw numerical_error("cell-block inverse: zero diagonal entry");

    const Vector m = cell_sizes(a.design);
    const Vector inv_d = a.diag.cwiseInverse();
    // (D_d + K M^{-1}) K' = -K D_{1/d}
    Matrix lhs = a.kernel * m.cwiseInverse().asDiagonal();
    lhs += Matrix(a.diag.asDiagonal());
    Eigen::PartialPivLU<Matrix> lu(lhs);
    // PartialPivLU has no rank query; read singularity off the U factor.
    const double u_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(u_min > 0.0) || !std::isfinite(u_min))
        throw numerical_error("cell-block inverse: singular reduced system");
    const Matrix rhs = -(a.kernel * inv_d.asDiagonal());
    return {a.design, inv_d, lu.solve(rhs), Norm::Bar};
}

double cbm_trace(const CellBlockMatrix& a) {
    const Design& d = a.design;
    double tr = 0.0;
    for (int c = 0; c < d.num_cells(); ++c) {
        const double denom = (a.norm == Norm::Bar) ? double(d.cells[c]) * d.cells[c]
                                                   : double(d.cells[c]);
        tr += a.diag[c] * d.cells[c] + a.kernel(c, c) / denom * d.cells[c];
    }
    return tr;
}

double cbm_max_abs(const CellBlockMatrix& a) {
    const Design& d = a.design;
    double best = 0.0;
    for (int r = 0; r < d.num_cells(); ++r) {
        for (int c = 0; c < d.num_cells(); ++c) {
            const double denom = (a.norm == Norm::Bar)
                                     ? double(d.cells[r]) * d.cells[c]
                                     : std::sqrt(double(d.cells[r]) * d.cells[c]);
            const double block_val = a.kernel(r, c) / denom;
            if (r == c) {
                best = std::max(best, std::abs(block_val + a.diag[r]));
                if (d.cells[r] > 1) best = std::max(best, std::abs(block_val));
            } else {
                best = std::max(best, std::abs(block_val));
            }
        }
    }
    return best;
}

double cbm_frobenius(const CellBlockMatrix& a) {
    const Design& d = a.design;
    double sq = 0.0;
    for (int r = 0; r < d.num_cells(); ++r) {
        const double mr = d.cells[r];
        for (int c = 0; c < d.num_cells(); ++c) {
            const double mc = d.cells[c];
            const double denom =
                (a.norm == Norm::Bar) ? mr * mc : std::sqrt(mr * mc);
            const double block_val = a.kernel(r, c) / denom;
            if (r == c) {
                sq += mr * (block_val + a.diag[r]) * (block_val + a.diag[r]);
                sq += (mr * mr - mr) * block_val * block_val;
            } else {
                sq += mr * mc * block_val * block_val;
            }
        }
    }
    return std::sqrt(sq);
}

Matrix khatri_rao_dense(const Matrix& A, const std::vector<int>& row_parts_A,
                        const std::vector<int>& col_parts_A, const Matrix& B,
                        const std::vector<int>& row_parts_B,
                        const std::vector<int>& col_parts_B) {
    auto check_tiling = [](const std::vector<int>& parts, Eigen::Index extent,
                           const char* what) {
        std::int64_t total = 0;
        for (int p : parts) {
            if (p < 1) throw std::invalid_argument(std::string("khatri-rao: nonpositive ") + what);
            total += p;
        }
        if (total != extent)
            throw std::invalid_argument(std::string("khatri-rao: ") + what +
                                        " partition does not tile the matrix");
    };
    if (row_parts_A.size() != row_parts_B.size() ||
        col_parts_A.size() != col_parts_B.size())
        throw std::invalid_argument("khatri-rao: operands need equal block counts");
    check_tiling(row_parts_A, A.rows(), "row");
    check_tiling(col_parts_A, A.cols(), "column");
    check_tiling(row_parts_B, B.rows(), "row");
    check_tiling(col_parts_B, B.cols(), "column");

    const std::size_t nr = row_parts_A.size(), nc = col_parts_A.size();
    std::vector<int> row_off(nr + 1, 0), col_off(nc + 1, 0);
    std::vector<int> arow_off(nr + 1, 0), acol_off(nc + 1, 0),
        brow_off(nr + 1, 0), bcol_off(nc + 1, 0);
    for (std::size_t i = 0; i < nr; ++i) {
        arow_off[i + 1] = arow_off[i] + row_parts_A[i];
        brow_off[i + 1] = brow_off[i] + row_parts_B[i];
        row_off[i + 1] = row_off[i] + row_parts_A[i] * row_parts_B[i];
    }
    for (std::size_t j = 0; j < nc; ++j) {
        acol_off[j + 1] = acol_off[j] + col_parts_A[j];
        bcol_off[j + 1] = bcol_off[j] + col_parts_B[j];
        col_off[j + 1] = col_off[j] + col_parts_A[j] * col_parts_B[j];
    }

    Matrix out = Matrix::Zero(row_off[nr], col_off[nc]);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            const auto Ab = A.block(arow_off[i], acol_off[j], row_parts_A[i], col_parts_A[j]);
            const auto Bb = B.block(brow_off[i], bcol_off[j], row_parts_B[i], col_parts_B[j]);
            for (int p = 0; p < Ab.rows(); ++p)
                for (int q = 0; q < Ab.cols(); ++q)
                    out.block(row_off[i] + p * Bb.rows(), col_off[j] + q * Bb.cols(),
                              Bb.rows(), Bb.cols()) = Ab(p, q) * Bb;
        }
    }
    return out;
}

}  // namespace crossinv
