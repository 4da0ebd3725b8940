#include "crossinv/sim.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "crossinv/inverse.hpp"

namespace crossinv {

std::string method_name(Method m) {
    switch (m) {
        case Method::Asymptotic: return "asymptotic";
        case Method::Neumann: return "neumann";
        case Method::Vcheck: return "vcheck";
        case Method::ExactStructured: return "exact-structured";
    }
    throw std::invalid_argument("unknown method");
}

void validate(const SimConfig& cfg) {
    validate(cfg.theta);
    if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (cfg.grid.empty()) throw std::invalid_argument("grid must be nonempty");
    for (const auto& [g, h] : cfg.grid)
        if (g < 1 || h < 1) throw std::invalid_argument("grid entries must be positive");
    if (cfg.threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (cfg.sim_case == SimCase::Case1) {
        if (cfg.lo < 1 || cfg.hi < cfg.lo)
            throw std::invalid_argument("cell range must satisfy 1 <= lo <= hi");
    } else {
        if (cfg.m_L_list.empty()) throw std::invalid_argument("m_L list must be nonempty");
        for (int m : cfg.m_L_list)
            if (m < 1) throw std::invalid_argument("m_L must be positive");
        if (cfg.delta_list.empty()) throw std::invalid_argument("delta list must be nonempty");
        for (double v : cfg.delta_list)
            if (!(v >= 0.0) || !(v < 1.0))
                throw std::invalid_argument("delta targets must lie in [0, 1)");
        if (cfg.r_list.empty()) throw std::invalid_argument("r list must be nonempty");
        for (int r : cfg.r_list)
            if (r < 0) throw std::invalid_argument("series orders must be nonnegative");
    }
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double air_from_residual(const CellBlockMatrix& residual, std::int64_t n,
                         double* max_resid) {
    if (max_resid) *max_resid = cbm_max_abs(residual);
    return cbm_frobenius(residual) / static_cast<double>(n);
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void sort_canonical(std::vector<SimRow>& rows) {
    std::sort(rows.begin(), rows.end(), [](const SimRow& a, const SimRow& b) {
        return std::tie(a.case_name, a.g, a.h, a.m_L, a.delta_target, a.r, a.replicate) <
               std::tie(b.case_name, b.g, b.h, b.m_L, b.delta_target, b.r, b.replicate);
    });
}

}  // namespace

double air(const CellBlockMatrix& v, const CellBlockMatrix& vinv_hat,
           std::int64_t dense_cap, double* max_resid) {
    if (v.design != vinv_hat.design)
        throw std::invalid_argument("residual requires matching designs");
    const std::int64_t n = v.design.n;
    if (n <= dense_cap) return air_dense(v, cbm_to_dense(vinv_hat), max_resid);
    CellBlockMatrix residual = cbm_add_scaled_identity(cbm_mul(v, vinv_hat), -1.0);
    return air_from_residual(residual, n, max_resid);
}

double air_dense(const CellBlockMatrix& v, const Matrix& vinv_hat, double* max_resid) {
    const Eigen::Index n = static_cast<Eigen::Index>(v.design.n);
    if (vinv_hat.rows() != n || vinv_hat.cols() != n)
        throw std::invalid_argument("residual requires matching dimensions");
    Matrix resid = cbm_to_dense(v) * vinv_hat;
    resid -= Matrix::Identity(n, n);
    if (max_resid) *max_resid = resid.cwiseAbs().maxCoeff();
    return resid.norm() / static_cast<double>(n);
}

SimReport run_case1(const SimConfig& cfg) {
    if (cfg.sim_case != SimCase::Case1 || cfg.method != Method::Asymptotic)
        throw std::invalid_argument("case 1 runs the asymptotic estimator");
    validate(cfg);
    SimReport report;
    for (const auto& [g, h] : cfg.grid)
        for (int b = 0; b < cfg.replicates; ++b) {
            const std::uint64_t seed_b =
                mix_seed(cfg.seed, {1, static_cast<std::uint64_t>(g),
                                    static_cast<std::uint64_t>(h),
                                    static_cast<std::uint64_t>(b)});
            const Design d = sample_design_uniform(g, h, cfg.lo, cfg.hi, seed_b);
            const CellBlockMatrix v = build_V(d, cfg.theta);
            const auto t0 = Clock::now();
            const CellBlockMatrix vhat = asymptotic_inverse(d, cfg.theta);
            const double elapsed = ms_since(t0);
            SimRow row;
            row.case_name = "case1";
            row.g = g;
            row.h = h;
            row.realized_delta = d.delta;
            row.replicate = b;
            row.n = d.n;
            row.air = air(v, vhat, cfg.dense_air_cap, &row.max_resid);
            row.elapsed_ms = elapsed;
            row.method = method_name(cfg.method);
            row.seed = seed_b;
            report.rows.push_back(std::move(row));
        }
    sort_canonical(report.rows);
    return report;
}

SimReport run_case2(const SimConfig& cfg) {
    if (cfg.sim_case != SimCase::Case2 || cfg.method != Method::Neumann)
        throw std::invalid_argument("case 2 runs the series estimator");
    validate(cfg);
    SimReport report;
    for (const auto& [g, h] : cfg.grid)
        for (std::size_t mi = 0; mi < cfg.m_L_list.size(); ++mi)
            for (std::size_t di = 0; di < cfg.delta_list.size(); ++di)
                for (int b = 0; b < cfg.replicates; ++b) {
                    const std::uint64_t seed_b = mix_seed(
                        cfg.seed, {2, static_cast<std::uint64_t>(g),
                                   static_cast<std::uint64_t>(h), mi, di,
                                   static_cast<std::uint64_t>(b)});
                    const Design d = sample_design_delta(
                        g, h, cfg.m_L_list[mi], cfg.delta_list[di], seed_b);
                    const CellBlockMatrix v = build_V(d, cfg.theta);
                    for (int r : cfg.r_list) {
                        const auto t0 = Clock::now();
                        const NeumannResult nr = neumann_inverse(d, cfg.theta, r);
                        const double elapsed = ms_since(t0);
                        SimRow row;
                        row.case_name = "case2";
                        row.g = g;
                        row.h = h;
                        row.m_L = cfg.m_L_list[mi];
                        row.delta_target = cfg.delta_list[di];
                        row.realized_delta = d.delta;
                        row.r = r;
                        row.replicate = b;
                        row.n = d.n;
                        row.air = air(v, nr.inverse, cfg.dense_air_cap, &row.max_resid);
                        row.elapsed_ms = elapsed;
                        row.method = method_name(cfg.method);
                        row.seed = seed_b;
                        report.rows.push_back(std::move(row));
                    }
                }
    sort_canonical(report.rows);
    return report;
}

std::string csv_header() {
    return "case,g,h,m_L,delta_target,realized_delta,r,replicate,n,air,"
           "max_resid,elapsed_ms,method,seed";
}

void write_csv(const SimReport& report, std::ostream& out, bool zero_elapsed) {
    out << csv_header() << '\n';
    for (const SimRow& row : report.rows) {
        out << row.case_name << ',' << row.g << ',' << row.h << ',' << row.m_L << ','
            << format_double(row.delta_target) << ','
            << format_double(row.realized_delta) << ',' << row.r << ','
            << row.replicate << ',' << row.n << ',' << format_double(row.air) << ','
            << format_double(row.max_resid) << ','
            << format_double(zero_elapsed ? 0.0 : row.elapsed_ms) << ',' << row.method
            << ',' << row.seed << '\n';
    }
}

MethodResult compute_inverse(const Design& d, const VarianceComponents& theta,
                             const std::string& method, int r) {
    MethodResult out;
    const auto t0 = Clock::now();
    if (method == "exact-dense") {
        out.structured = false;
        out.dense = dense_inverse_oracle(d, theta);
    } else if (method == "exact-structured") {
        out.cbm = cbm_inverse(build_V(d, theta));
    } else if (method == "exact-sm") {
        out.structured = false;
        out.dense = sherman_morrison_inverse(d, theta);
    } else if (method == "vcheck") {
        out.cbm = vcheck_inverse(d, theta);
    } else if (method == "asymptotic") {
        out.cbm = asymptotic_inverse(d, theta);
    } else if (method == "neumann") {
        NeumannResult nr = neumann_inverse(d, theta, r);
        out.cbm = std::move(nr.inverse);
        out.outside_theorem_hypothesis = nr.outside_theorem_hypothesis;
    } else if (method == "balanced") {
        out.cbm = balanced_inverse(d, theta);
    } else {
        throw std::invalid_argument("unknown method: " + method);
    }
    out.elapsed_ms = ms_since(t0);
    return out;
}

std::vector<BenchRow> bench_timing(const Design& d, const VarianceComponents& theta,
                                   const std::vector<std::string>& methods, int r,
                                   std::int64_t dense_air_cap) {
    const CellBlockMatrix v = build_V(d, theta);
    std::vector<BenchRow> rows;
    rows.reserve(methods.size());
    for (const std::string& method : methods) {
        const MethodResult res = compute_inverse(d, theta, method, r);
        BenchRow row;
        row.method = method;
        row.g = d.g;
        row.h = d.h;
        row.n = d.n;
        row.elapsed_ms = res.elapsed_ms;
        row.air = res.structured ? air(v, res.cbm, dense_air_cap, &row.max_resid)
                                 : air_dense(v, res.dense, &row.max_resid);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    const auto trim = [](std::string s) {
        const auto begin = s.find_first_not_of(" \t\r");
        if (begin == std::string::npos) return std::string();
        const auto end = s.find_last_not_of(" \t\r");
        return s.substr(begin, end - begin + 1);
    };
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " is not key=value");
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " has an empty key");
        out[key] = trim(stripped.substr(eq + 1));
    }
    return out;
}

}  // namespace crossinv
