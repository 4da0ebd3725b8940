#pragma once
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "crossinv/cell_block.hpp"
#include "crossinv/design.hpp"

namespace crossinv::testutil {

// Small unbalanced layout used as the running example across the suite:
// m_L = 1, m_U = 3, n = 10.
inline Design worked_design() {
    return new_design(2, 3, std::vector<int>{2, 1, 3, 1, 2, 1});
}

inline double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols,
                            std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
    Matrix out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            out(i, j) = lo + (hi - lo) * uniform01(rng);
    return out;
}

inline Vector random_vector(Eigen::Index size, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
    Vector out(size);
    for (Eigen::Index i = 0; i < size; ++i) out[i] = lo + (hi - lo) * uniform01(rng);
    return out;
}

// Dense expansion assembled through the n x gh cell indicator matrix, an
// independent path from cbm_to_dense.
inline Matrix dense_via_indicator(const CellBlockMatrix& a) {
    const Design& d = a.design;
    const auto off = cell_offsets(d);
    Matrix P = Matrix::Zero(d.n, d.num_cells());
    for (int c = 0; c < d.num_cells(); ++c)
        P.block(off[c], c, d.cells[c], 1).setOnes();
    Vector scale(d.num_cells());
    for (int c = 0; c < d.num_cells(); ++c)
        scale[c] = (a.norm == Norm::Bar) ? 1.0 / d.cells[c]
                                         : 1.0 / std::sqrt(double(d.cells[c]));
    Matrix out =
        (P * scale.asDiagonal()) * a.kernel * (scale.asDiagonal() * P.transpose());
    for (int c = 0; c < d.num_cells(); ++c)
        out.block(off[c], off[c], d.cells[c], d.cells[c]).diagonal().array() +=
            a.diag[c];
    return out;
}

inline double max_abs_diff(const Matrix& x, const Matrix& y) {
    return (x - y).cwiseAbs().maxCoeff();
}

}  // namespace crossinv::testutil
