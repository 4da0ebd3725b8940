#pragma once
#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "crossinv/design.hpp"

namespace crossinv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Raised when a computation breaks down numerically (singular reduced
// system, non-positive rank-one update denominator). Distinct from
// std::invalid_argument, which covers rejected inputs.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Block expansion rule for the kernel. BAR divides block (a,b) by
// m_a * m_b (averaging), TILDE by sqrt(m_a * m_b) (unit block vectors).
enum class Norm { Bar, Tilde };

enum class Side { Left, Right, Both };

// Compressed representation of a structured n x n matrix over the cells of a
// design: blockdiag(diag[c] * I_{m_c}) plus an all-ones expansion of the
// gh x gh kernel. Block (a,b) of the expansion is
//   kernel(a,b) / (m_a * m_b) * J       under BAR,
//   kernel(a,b) / sqrt(m_a * m_b) * J   under TILDE,
// with J the all-ones m_a x m_b block. Addition, multiplication,
// cell-diagonal weighting, and inversion stay inside this family, so every
// structured formula in the model can be carried at gh x gh cost.
// Values are immutable by convention; operations return new values.
struct CellBlockMatrix {
    Design design;
    Vector diag;    // size g*h
    Matrix kernel;  // g*h x g*h
    Norm norm = Norm::Bar;
};

CellBlockMatrix cbm_zero(const Design& d, Norm norm = Norm::Bar);
CellBlockMatrix cbm_identity(const Design& d, Norm norm = Norm::Bar);
CellBlockMatrix cbm_make(const Design& d, Vector diag, Matrix kernel, Norm norm);
// Kernel-only value (diag = 0).
CellBlockMatrix cbm_from_kernel(const Design& d, Matrix kernel, Norm norm);

// Rescales the kernel so the same n x n matrix is represented under the
// target norm: TILDE -> BAR multiplies kernel entry (a,b) by sqrt(m_a m_b).
CellBlockMatrix cbm_convert(const CellBlockMatrix& a, Norm target);

CellBlockMatrix cbm_add(const CellBlockMatrix& a, const CellBlockMatrix& b);
CellBlockMatrix cbm_scale(const CellBlockMatrix& a, double s);
// A + s * I_n.
CellBlockMatrix cbm_add_scaled_identity(const CellBlockMatrix& a, double s);

// Product of the represented matrices, returned in BAR form. The kernel rule
// in BAR is D_dA * K_B + K_A * D_dB + K_A * M^{-1} * K_B.
CellBlockMatrix cbm_mul(const CellBlockMatrix& a, const CellBlockMatrix& b);

// Multiplication by blockdiag(w_c * I_{m_c}) on the chosen side(s).
CellBlockMatrix cbm_cell_diag_sandwich(const CellBlockMatrix& a, const Vector& w,
                                       Side side);

// y = A x in O(n + (gh)^2) via per-cell sums.
Vector cbm_matvec(const CellBlockMatrix& a, const Vector& x);

Matrix cbm_to_dense(const CellBlockMatrix& a);

// Inverse of R(d, K) as R(1/d, K') with K' solving the gh x gh system
// (D_d + K M^{-1}) K' = -K D_{1/d} in BAR form. Cost is O((gh)^3),
// independent of the cell sizes.
CellBlockMatrix cbm_inverse(const CellBlockMatrix& a);

double cbm_trace(const CellBlockMatrix& a);
// Largest entry magnitude of the represented matrix, in closed form.
double cbm_max_abs(const CellBlockMatrix& a);
// Frobenius norm of the represented matrix, in closed form.
double cbm_frobenius(const CellBlockMatrix& a);

// Blockwise Kronecker product of conformally partitioned matrices: block
// (i,j) of the result is A_ij (x) B_ij. Partition vectors list the block
// sizes and must tile each matrix exactly.
Matrix khatri_rao_dense(const Matrix& A, const std::vector<int>& row_parts_A,
                        const std::vector<int>& col_parts_A, const Matrix& B,
                        const std::vector<int>& row_parts_B,
                        const std::vector<int>& col_parts_B);

}  // namespace crossinv
