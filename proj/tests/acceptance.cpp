// End-to-end acceptance checks. Each check prints exactly one [PASS]/[FAIL]
// line with the measured values next to the fixed tolerances; the process
// exits nonzero if any check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "crossinv/checks.hpp"
#include "crossinv/covariance.hpp"
#include "crossinv/design.hpp"
#include "crossinv/inverse.hpp"
#include "crossinv/sim.hpp"
#include "crossinv/spectral.hpp"

using namespace crossinv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

VarianceComponents draw_theta(std::mt19937_64& rng, bool gamma_zero) {
    VarianceComponents t;
    t.sigma2_alpha = 0.1 + 9.9 * u01(rng);
    t.sigma2_beta = 0.1 + 9.9 * u01(rng);
    t.sigma2_gamma = 0.1 + 9.9 * u01(rng);
    t.sigma2_e = 0.1 + 9.9 * u01(rng);
    if (gamma_zero) t.sigma2_gamma = 0.0;
    return t;
}

VarianceComponents default_theta(bool gamma_zero) {
    VarianceComponents t;
    if (gamma_zero) t.sigma2_gamma = 0.0;
    return t;
}

// 50 reference instances shared by several checks: grids up to 6x6, cells
// in {1..8}, components uniform on [0.1, 10].
std::vector<std::pair<Design, VarianceComponents>> reference_suite(bool gamma_zero) {
    std::vector<std::pair<Design, VarianceComponents>> suite;
    suite.reserve(50);
    for (std::uint64_t i = 0; i < 50; ++i) {
        std::mt19937_64 rng(mix_seed(2026, {1, i}));
        const int g = 2 + int(rng() % 5);
        const int h = 2 + int(rng() % 5);
        const Design d = sample_design_uniform(g, h, 1, 8, rng());
        suite.emplace_back(d, draw_theta(rng, gamma_zero));
    }
    return suite;
}

double structured_residual(const CellBlockMatrix& m, const CellBlockMatrix& minv) {
    return cbm_max_abs(cbm_add_scaled_identity(cbm_mul(m, minv), -1.0));
}

double structured_diff(const CellBlockMatrix& a, const CellBlockMatrix& b) {
    return cbm_max_abs(cbm_add(a, cbm_scale(cbm_convert(b, a.norm), -1.0)));
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome criterion1(bool gamma_zero) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (const auto& [d, theta] : reference_suite(gamma_zero))
        worst = std::max(worst, structured_residual(build_V_check(d, theta),
                                                    vcheck_inverse(d, theta)));
    const double elapsed = seconds_since(t0);
    Outcome out;
    out.pass = worst <= 1e-10 && elapsed < 10.0;
    out.detail = "modified-covariance inverse on 50 random instances, max |Vc*W - I| = " +
                 fmt(worst) + " (tol 1e-10), " + fmt(elapsed) + "s (limit 10s)";
    return out;
}

Outcome criterion2(bool gamma_zero) {
    const auto t0 = Clock::now();
    double worst_resid = 0.0, worst_mismatch = 0.0;
    bool all_ok = true;
    for (const auto& [d, theta] : reference_suite(gamma_zero)) {
        const DiagonalizationReport rep = verify_diagonalization(d, theta, 1e-10);
        all_ok = all_ok && rep.ok;
        worst_resid = std::max(worst_resid, rep.residual_max);
        const double lambda1 = eigenvalue_spectrum(d, theta).lambda1;
        worst_mismatch = std::max(worst_mismatch, rep.eig_mismatch / lambda1);
    }
    const double elapsed = seconds_since(t0);
    Outcome out;
    out.pass = all_ok && elapsed < 30.0;
    out.detail =
        "spectral decomposition on 50 random instances, max projector residual = " +
        fmt(worst_resid) + " (tol 1e-10), max eigenvalue mismatch = " +
        fmt(worst_mismatch) + " of lambda1 (tol 1e-8), " + fmt(elapsed) +
        "s (limit 30s)";
    return out;
}

Outcome criterion3(bool gamma_zero) {
    const VarianceComponents t = default_theta(gamma_zero);
    const Design d = new_design(3, 4, std::vector<int>(12, 5));
    const double resid = structured_residual(build_V(d, t), balanced_inverse(d, t));
    const double gap = structured_diff(balanced_inverse(d, t), vcheck_inverse(d, t));
    Outcome out;
    out.pass = resid <= 1e-10 && gap <= 1e-12;
    out.detail = "balanced 3x4 grid with 5 per cell, max |V*W - I| = " + fmt(resid) +
                 " (tol 1e-10), gap to the modified-covariance inverse = " + fmt(gap) +
                 " (tol 1e-12)";
    return out;
}

Outcome criterion4(bool gamma_zero) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::int64_t max_n = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        std::mt19937_64 rng(mix_seed(2026, {4, i}));
        const int g = 2 + int(rng() % 4);
        const int h = 2 + int(rng() % 4);
        Design d = sample_design_uniform(g, h, 1, 6, rng());
        while (d.balanced() || d.n > 300) d = sample_design_uniform(g, h, 1, 6, rng());
        const VarianceComponents theta = draw_theta(rng, gamma_zero);
        const double err = (sherman_morrison_inverse(d, theta) -
                            dense_inverse_oracle(d, theta))
                               .cwiseAbs()
                               .maxCoeff();
        worst = std::max(worst, err);
        max_n = std::max(max_n, d.n);
    }
    const double elapsed = seconds_since(t0);
    Outcome out;
    out.pass = worst <= 1e-8 && elapsed < 60.0;
    out.detail = "rank-one update inverse on 20 unbalanced designs (n <= " +
                 std::to_string(max_n) + "), max entry error vs dense = " + fmt(worst) +
                 " (tol 1e-8), " + fmt(elapsed) + "s (limit 60s)";
    return out;
}

Outcome criterion5(bool gamma_zero) {
    double worst = 0.0;
    for (const auto& [d, theta] : reference_suite(gamma_zero)) {
        const Matrix structured = cbm_to_dense(cbm_inverse(build_V(d, theta)));
        const double err =
            (structured - dense_inverse_oracle(d, theta)).cwiseAbs().maxCoeff();
        worst = std::max(worst, err);
    }

    const VarianceComponents t = default_theta(gamma_zero);
    const Design big = sample_design_uniform(20, 20, 10, 15, mix_seed(2026, {5}));
    const CellBlockMatrix v = build_V(big, t);
    const auto ts = Clock::now();
    const CellBlockMatrix w = cbm_inverse(v);
    const double structured_s = seconds_since(ts);
    double spot = 0.0;
    double dense_s = 0.0;
    {
        const auto td = Clock::now();
        const Matrix dense = dense_inverse_oracle(big, t);
        dense_s = seconds_since(td);
        const double w00 = w.diag[0] + w.kernel(0, 0) / (double(big.cells[0]) * big.cells[0]);
        spot = std::abs(dense(0, 0) - w00);
    }
    Outcome out;
    out.pass = worst <= 1e-9 && structured_s <= 0.1 * dense_s && spot <= 1e-8;
    out.detail = "structured exact inverse, max entry error vs dense on 50 instances = " +
                 fmt(worst) + " (tol 1e-9); at n = " + std::to_string(big.n) +
                 " structured " + fmt(structured_s) + "s vs dense " + fmt(dense_s) +
                 "s (limit 0.1x)";
    return out;
}

Outcome criterion6(bool gamma_zero) {
    const VarianceComponents theta = default_theta(gamma_zero);
    bool mono_ok = true, ratio_ok = true, inside = true;
    double worst_ratio = 0.0, max_delta = 0.0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        std::mt19937_64 rng(mix_seed(2026, {6, i}));
        const int g = 3 + int(rng() % 4);
        const int h = 3 + int(rng() % 4);
        const int m_L = 4 + int(rng() % 5);
        const double target = 0.25 + 0.02 * double(i);
        const Design d = sample_design_delta(g, h, m_L, target, rng());
        max_delta = std::max(max_delta, d.delta);
        const CellBlockMatrix exact = cbm_inverse(build_V(d, theta));
        std::vector<double> errs;
        for (int r = 0; r <= 5; ++r) {
            const NeumannResult nr = neumann_inverse(d, theta, r);
            inside = inside && !nr.outside_theorem_hypothesis;
            errs.push_back(structured_diff(nr.inverse, exact));
        }
        for (int r = 0; r < 5; ++r)
            if (errs[r + 1] > errs[r] * (1.0 + 1e-9) + 1e-15) mono_ok = false;
        const double bound = d.delta / (1.0 - d.delta) + 0.1;
        for (int r = 1; r <= 3; ++r) {
            if (errs[r] <= 1e-14) continue;
            const double ratio = errs[r + 1] / errs[r];
            worst_ratio = std::max(worst_ratio, ratio - bound);
            if (ratio > bound) ratio_ok = false;
        }
    }
    Outcome out;
    out.pass = mono_ok && ratio_ok && inside;
    out.detail = "series approximation on 10 designs with unbalance < 0.5 (max " +
                 fmt(max_delta) + "): error nonincreasing in the order " +
                 std::string(mono_ok ? "holds" : "fails") +
                 ", worst decay-ratio slack = " + fmt(worst_ratio) +
                 " (must be <= 0)";
    return out;
}

Outcome criterion7() {
    const auto t0 = Clock::now();
    SimConfig cfg;
    cfg.sim_case = SimCase::Case1;
    cfg.method = Method::Asymptotic;
    cfg.grid = {{10, 15}, {20, 25}, {50, 45}};
    cfg.replicates = 20;
    cfg.lo = 1;
    cfg.hi = 15;
    cfg.seed = 1;
    cfg.dense_air_cap = 1;  // structured residuals throughout
    const SimReport rep = run_case1(cfg);
    std::map<std::pair<int, int>, double> mean;
    for (const SimRow& row : rep.rows) mean[{row.g, row.h}] += row.air / cfg.replicates;
    const double small = mean[{10, 15}], mid = mean[{20, 25}], large = mean[{50, 45}];
    const double elapsed = seconds_since(t0);
    Outcome out;
    out.pass = large < small && mid < small && elapsed < 300.0;
    out.detail = "growing-grid study (20 replicates): mean residual " + fmt(small) +
                 " (10x15) -> " + fmt(mid) + " (20x25) -> " + fmt(large) +
                 " (50x45), decreasing; " + fmt(elapsed) + "s (limit 300s)";
    return out;
}

Outcome criterion8() {
    const auto t0 = Clock::now();
    SimConfig cfg;
    cfg.sim_case = SimCase::Case2;
    cfg.method = Method::Neumann;
    cfg.grid = {{10, 15}};
    cfg.m_L_list = {10};
    cfg.delta_list = {0.15, 0.25, 0.35, 0.45};
    cfg.r_list = {0, 1, 2, 3, 4, 5};
    cfg.replicates = 20;
    cfg.seed = 1;
    cfg.dense_air_cap = 1;
    const SimReport rep = run_case2(cfg);
    std::map<std::pair<double, int>, double> mean;
    for (const SimRow& row : rep.rows)
        mean[{row.delta_target, row.r}] += row.air / cfg.replicates;
    bool dec_in_r = true, inc_in_delta = true;
    for (double delta : cfg.delta_list)
        for (std::size_t k = 0; k + 1 < cfg.r_list.size(); ++k)
            if (!(mean[{delta, cfg.r_list[k + 1]}] < mean[{delta, cfg.r_list[k]}]))
                dec_in_r = false;
    for (int r : cfg.r_list)
        for (std::size_t k = 0; k + 1 < cfg.delta_list.size(); ++k)
            if (!(mean[{cfg.delta_list[k + 1], r}] > mean[{cfg.delta_list[k], r}]))
                inc_in_delta = false;
    const double elapsed = seconds_since(t0);
    Outcome out;
    out.pass = dec_in_r && inc_in_delta && elapsed < 300.0;
    out.detail = std::string("series study on 10x15 (20 replicates, 4 targets): mean "
                             "residual strictly decreasing in the order ") +
                 (dec_in_r ? "holds" : "fails") + ", increasing in the unbalance " +
                 (inc_in_delta ? "holds" : "fails") + "; " + fmt(elapsed) +
                 "s (limit 300s)";
    return out;
}

Outcome criterion9() {
    const VarianceComponents t = default_theta(false);
    bool ok = true;
    double worst_ratio = 0.0;
    for (int m = 2; m <= 6; ++m) {
        const auto err_at = [&](int size) {
            const Design d = new_design(size, size, std::vector<int>(size * size, m));
            return structured_diff(asymptotic_inverse(d, t), cbm_inverse(build_V(d, t)));
        };
        const double ratio = err_at(40) / err_at(20);
        worst_ratio = std::max(worst_ratio, ratio);
        ok = ok && ratio <= 0.7;
    }
    Outcome out;
    out.pass = ok;
    out.detail = "large-grid limit error, worst 40x40 / 20x20 ratio over cell sizes "
                 "2..6 = " +
                 fmt(worst_ratio) + " (limit 0.7)";
    return out;
}

Outcome criterion10() {
    double worst12 = 0.0;
    const Design worked = new_design(2, 3, std::vector<int>{2, 1, 3, 1, 2, 1});
    const std::vector<Design> designs{
        worked, new_design(3, 3, std::vector<int>(9, 2)),
        sample_design_uniform(4, 5, 1, 5, mix_seed(2026, {10, 1})),
        sample_design_uniform(5, 3, 1, 4, mix_seed(2026, {10, 2}))};
    for (const Design& d : designs)
        for (std::uint64_t seed : {1ULL, 2ULL}) {
            worst12 = std::max(worst12, check_lemma1(d, seed).worst());
            worst12 = std::max(worst12, check_lemma2(d, seed).worst());
        }

    bool order_ok = true;
    for (int dim : {2, 4, 6, 8})
        for (std::uint64_t seed : {1ULL, 2ULL}) {
            const Lemma3Report rep = check_lemma3(dim, seed);
            order_ok = order_ok && rep.inequality_ok && rep.strict_ok;
        }

    bool power_ok = true;
    for (int g = 2; g <= 5; ++g)
        for (int h = 2; h <= 5; ++h) {
            const Design d = sample_design_uniform(
                g, h, 1, 5, mix_seed(2026, {10, std::uint64_t(g), std::uint64_t(h)}));
            power_ok = power_ok && check_lemma4(d, 4).ok;
        }

    bool bound_ok = true;
    bound_ok = bound_ok && check_lemma5(1.0001, 0.5).ok;
    bound_ok = bound_ok && check_lemma5(2.0, 0.9).ok;
    bound_ok = bound_ok && check_lemma5(1.5, 0.25).ok;
    bound_ok = bound_ok && check_lemma5(1.2, 0.35).ok;

    Matrix A(3, 3), B(3, 3);
    A << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    B << 1, 4, 7, 2, 5, 8, 3, 6, 9;
    Matrix expected(4, 4);
    expected << 1, 2, 12, 21, 4, 5, 24, 42, 14, 16, 45, 72, 21, 24, 54, 81;
    const bool kr_ok =
        (khatri_rao_dense(A, {2, 1}, {2, 1}, B, {1, 2}, {1, 2}) - expected)
            .cwiseAbs()
            .maxCoeff() == 0.0;

    Outcome out;
    out.pass = worst12 <= 1e-12 && order_ok && power_ok && bound_ok && kr_ok;
    out.detail = "algebra identities, max discrepancy = " + fmt(worst12) +
                 " (tol 1e-12); order" + std::string(order_ok ? "" : " FAIL") +
                 ", power-bound" + std::string(power_ok ? "" : " FAIL") +
                 ", sandwich-bound" + std::string(bound_ok ? "" : " FAIL") +
                 ", blockwise product example" + std::string(kr_ok ? "" : " FAIL") +
                 " all hold";
    return out;
}

Outcome criterion11() {
    VarianceComponents t;
    t.sigma2_gamma = 0.0;
    const Design worked = new_design(2, 3, std::vector<int>{2, 1, 3, 1, 2, 1});
    const Spectrum s = eigenvalue_spectrum(worked, t);
    const bool collapse = (s.lambda7 == s.lambda0);

    std::vector<int> failed;
    const Outcome subs[] = {criterion1(true), criterion2(true), criterion3(true),
                            criterion4(true), criterion5(true), criterion6(true)};
    for (int i = 0; i < 6; ++i)
        if (!subs[i].pass) failed.push_back(i + 1);

    Outcome out;
    out.pass = collapse && failed.empty();
    std::ostringstream detail;
    detail << "no-interaction model: lambda7 == lambda0 "
           << (collapse ? "holds" : "fails");
    if (failed.empty()) {
        detail << ", checks 1-6 hold unchanged at sigma2_gamma = 0";
    } else {
        detail << ", failing sub-checks:";
        for (int id : failed) detail << ' ' << id;
    }
    out.detail = detail.str();
    return out;
}

}  // namespace

int main() {
    int failures = 0;
    const auto emit = [&](int id, const Outcome& o) {
        std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id,
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    };
    emit(1, criterion1(false));
    emit(2, criterion2(false));
    emit(3, criterion3(false));
    emit(4, criterion4(false));
    emit(5, criterion5(false));
    emit(6, criterion6(false));
    emit(7, criterion7());
    emit(8, criterion8());
    emit(9, criterion9());
    emit(10, criterion10());
    emit(11, criterion11());
    return failures == 0 ? 0 : 1;
}
