#pragma once
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crossinv/cell_block.hpp"
#include "crossinv/covariance.hpp"
#include "crossinv/design.hpp"

namespace crossinv {

enum class SimCase { Case1, Case2 };
enum class Method { Asymptotic, Neumann, Vcheck, ExactStructured };

std::string method_name(Method m);

struct SimConfig {
    SimCase sim_case = SimCase::Case1;
    std::vector<std::pair<int, int>> grid;  // (g, h) pairs
    VarianceComponents theta;
    int replicates = 20;
    int lo = 1, hi = 15;            // case 1 cell-count range
    std::vector<int> m_L_list;      // case 2
    std::vector<double> delta_list; // case 2 targets
    std::vector<int> r_list;        // case 2 series orders
    std::uint64_t seed = 1;
    Method method = Method::Asymptotic;
    // AIR switches from the dense product to structured products above this n.
    std::int64_t dense_air_cap = 5000;
    int threads = 1;
    bool zero_elapsed = false;  // write elapsed_ms as 0 for byte-stable output
};

void validate(const SimConfig& cfg);

struct SimRow {
    std::string case_name;
    int g = 0, h = 0;
    int m_L = -1;
    double delta_target = -1.0;
    double realized_delta = 0.0;
    int r = -1;
    int replicate = 0;
    std::int64_t n = 0;
    double air = 0.0;
    double max_resid = 0.0;
    double elapsed_ms = 0.0;
    std::string method;
    std::uint64_t seed = 0;
};

struct SimReport {
    std::vector<SimRow> rows;
};

// Per-replicate inversion residual (1/n) * frobenius(V * Vinv_hat - I).
// Dense product when n <= dense_cap, otherwise closed-form structured
// products; the two paths compute the same value. Optionally reports the
// max-abs residual entry.
double air(const CellBlockMatrix& v, const CellBlockMatrix& vinv_hat,
           std::int64_t dense_cap, double* max_resid = nullptr);
double air_dense(const CellBlockMatrix& v, const Matrix& vinv_hat,
                 double* max_resid = nullptr);

// Growing grids, cells discrete uniform on {lo..hi}, asymptotic estimator.
// Replicate b of pair (g, h) derives its seed as mix_seed(seed, {1, g, h, b}).
SimReport run_case1(const SimConfig& cfg);

// Fixed grid, cells on {m_L .. floor(m_L/(1-delta))}, series estimator per
// order in r_list on a design shared across orders. Replicate b at m_L
// index mi and delta index di derives mix_seed(seed, {2, g, h, mi, di, b}).
SimReport run_case2(const SimConfig& cfg);

std::string csv_header();
void write_csv(const SimReport& report, std::ostream& out, bool zero_elapsed);

// Inverse construction selected by name: exact-dense, exact-structured,
// exact-sm, vcheck, asymptotic, neumann (order r), balanced. Exactly one of
// cbm/dense is populated, per the structured flag.
struct MethodResult {
    bool structured = true;
    CellBlockMatrix cbm;
    Matrix dense;
    double elapsed_ms = 0.0;
    bool outside_theorem_hypothesis = false;
};

MethodResult compute_inverse(const Design& d, const VarianceComponents& theta,
                             const std::string& method, int r);

struct BenchRow {
    std::string method;
    int g = 0, h = 0;
    std::int64_t n = 0;
    double elapsed_ms = 0.0;
    double air = 0.0;
    double max_resid = 0.0;
};

std::vector<BenchRow> bench_timing(const Design& d, const VarianceComponents& theta,
                                   const std::vector<std::string>& methods, int r,
                                   std::int64_t dense_air_cap);

// key=value lines, '#' comments, blank lines ignored.
std::map<std::string, std::string> read_config_file(const std::string& path);

}  // namespace crossinv
