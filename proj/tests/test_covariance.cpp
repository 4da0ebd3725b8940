#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crossinv/covariance.hpp"
#include "support.hpp"

using namespace crossinv;
using testutil::max_abs_diff;

namespace {

// Covariance assembled from the effect indicator matrices, the defining
// model form and an independent path from the compressed builders.
Matrix dense_covariance_oracle(const Design& d, const VarianceComponents& t) {
    Matrix za = Matrix::Zero(d.n, d.g);
    Matrix zb = Matrix::Zero(d.n, d.h);
    Matrix zg = Matrix::Zero(d.n, d.num_cells());
    std::int64_t row = 0;
    for (int i = 0; i < d.g; ++i)
        for (int j = 0; j < d.h; ++j)
            for (int k = 0; k < d.cell(i, j); ++k, ++row) {
                za(row, i) = 1.0;
                zb(row, j) = 1.0;
                zg(row, d.flat_index(i, j)) = 1.0;
            }
    Matrix v = t.sigma2_alpha * (za * za.transpose());
    v += t.sigma2_beta * (zb * zb.transpose());
    v += t.sigma2_gamma * (zg * zg.transpose());
    v += t.sigma2_e * Matrix::Identity(d.n, d.n);
    return v;
}

}  // namespace

TEST_CASE("variance components are validated") {
    VarianceComponents t;
    CHECK_NOTHROW(validate(t));
    t.sigma2_gamma = 0.0;
    CHECK_NOTHROW(validate(t));
    t.sigma2_alpha = -1.0;
    CHECK_THROWS_AS(validate(t), std::invalid_argument);
    t = VarianceComponents{};
    t.sigma2_e = 0.0;
    CHECK_THROWS_AS(validate(t), std::invalid_argument);
    t.sigma2_e = -2.0;
    CHECK_THROWS_AS(validate(t), std::invalid_argument);
}

TEST_CASE("covariance builders match the indicator-matrix model") {
    const VarianceComponents t;
    for (const Design& d : {testutil::worked_design(),
                            sample_design_uniform(3, 4, 1, 5, 21),
                            new_design(2, 2, std::vector<int>{3, 3, 3, 3})}) {
        const Matrix oracle = dense_covariance_oracle(d, t);
        CHECK(max_abs_diff(cbm_to_dense(build_V(d, t)), oracle) <= 1e-12);
        CHECK(max_abs_diff(cbm_to_dense(build_D(d, t)),
                           oracle - t.sigma2_e * Matrix::Identity(d.n, d.n)) <= 1e-12);
    }
}

TEST_CASE("modified covariance rescales only the diagonal") {
    const VarianceComponents t;
    const Design d = testutil::worked_design();
    const CellBlockMatrix vc = build_V_check(d, t);

    // sigma2_e * m_c / m_U across cells (2,1,3,1,2,1) with m_U = 3.
    Vector expected(6);
    expected << 8.0 / 3.0, 4.0 / 3.0, 4.0, 4.0 / 3.0, 8.0 / 3.0, 4.0 / 3.0;
    CHECK((vc.diag - expected).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(max_abs_diff(vc.kernel, build_V(d, t).kernel) == 0.0);

    // V = Vcheck + sigma2_e * blockdiag(w_c I).
    const Vector w = build_I_delta(d);
    Vector expected_w(6);
    expected_w << 1.0 / 3.0, 2.0 / 3.0, 0.0, 2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0;
    CHECK((w - expected_w).cwiseAbs().maxCoeff() <= 1e-14);
    const CellBlockMatrix gap = cbm_cell_diag_sandwich(
        cbm_scale(cbm_identity(d), t.sigma2_e), w, Side::Left);
    CHECK(max_abs_diff(cbm_to_dense(cbm_add(vc, gap)),
                       cbm_to_dense(build_V(d, t))) <= 1e-12);

    const Design balanced = new_design(2, 3, std::vector<int>(6, 4));
    CHECK(max_abs_diff(cbm_to_dense(build_V_check(balanced, t)),
                       cbm_to_dense(build_V(balanced, t))) <= 1e-12);
    CHECK(build_I_delta(balanced).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("response draws are deterministic and follow the model covariance") {
    const VarianceComponents t;
    const Design d = new_design(2, 2, std::vector<int>{1, 1, 1, 1});
    const double mu = 2.0;

    const Vector y0 = sample_responses(d, t, mu, 31);
    CHECK((y0 - sample_responses(d, t, mu, 31)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((y0 - sample_responses(d, t, mu, 32)).cwiseAbs().maxCoeff() > 0.0);

    const Matrix v = cbm_to_dense(build_V(d, t));
    const int reps = 20000;
    Vector mean = Vector::Zero(d.n);
    Matrix second = Matrix::Zero(d.n, d.n);
    for (int rep = 0; rep < reps; ++rep) {
        const Vector y = sample_responses(d, t, mu, mix_seed(1000, {std::uint64_t(rep)}));
        mean += y;
        const Vector c = y - Vector::Constant(d.n, mu);
        second += c * c.transpose();
    }
    mean /= reps;
    second /= reps;

    // Known-mean moment estimates; every entry must sit within five standard
    // errors of the model value.
    for (int p = 0; p < d.n; ++p) {
        CHECK(std::abs(mean[p] - mu) <= 5.0 * std::sqrt(v(p, p) / reps));
        for (int q = 0; q < d.n; ++q) {
            const double se = std::sqrt((v(p, p) * v(q, q) + v(p, q) * v(p, q)) / reps);
            CHECK(std::abs(second(p, q) - v(p, q)) <= 5.0 * se);
        }
    }
}
