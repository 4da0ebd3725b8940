#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crossinv/checks.hpp"
#include "crossinv/covariance.hpp"
#include "crossinv/design.hpp"
#include "crossinv/inverse.hpp"
#include "crossinv/sim.hpp"
#include "crossinv/spectral.hpp"

namespace {

using namespace crossinv;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct ThetaFlags {
    double sa2 = 5.0, sb2 = 7.0, sg2 = 3.0, se2 = 4.0;
    bool defaulted = true;

    VarianceComponents value() const { return {sa2, sb2, sg2, se2}; }
};

void add_theta_flags(CLI::App* sub, ThetaFlags& t) {
    sub->add_option("--sa2", t.sa2, "row effect variance")->capture_default_str();
    sub->add_option("--sb2", t.sb2, "column effect variance")->capture_default_str();
    sub->add_option("--sg2", t.sg2, "interaction variance")->capture_default_str();
    sub->add_option("--se2", t.se2, "observation noise variance")->capture_default_str();
}

void finish_theta(const CLI::App* sub, ThetaFlags& t) {
    t.defaulted = sub->count("--sa2") == 0 && sub->count("--sb2") == 0 &&
                  sub->count("--sg2") == 0 && sub->count("--se2") == 0;
}

struct DesignFlags {
    std::string cells_file;
    int g = 0, h = 0;
    int m = 0;
    int mlo = 0, mhi = 0;
    int m_L = 0;
    double delta = -1.0;
    std::uint64_t seed = 1;
};

void add_design_flags(CLI::App* sub, DesignFlags& f) {
    sub->add_option("--cells", f.cells_file, "design file: 'g h' then g rows of h counts");
    sub->add_option("--g", f.g, "rows of the factor grid");
    sub->add_option("--h", f.h, "columns of the factor grid");
    sub->add_option("--m", f.m, "balanced cell count");
    sub->add_option("--mlo", f.mlo, "cell count sampling lower bound");
    sub->add_option("--mhi", f.mhi, "cell count sampling upper bound");
    sub->add_option("--mL", f.m_L, "smallest cell count for imbalance sampling");
    sub->add_option("--delta", f.delta, "imbalance target in [0,1)");
    sub->add_option("--seed", f.seed, "sampling seed")->capture_default_str();
}

Design resolve_design(const DesignFlags& f) {
    if (!f.cells_file.empty()) {
        Design d = load_design(f.cells_file);
        if ((f.g > 0 && f.g != d.g) || (f.h > 0 && f.h != d.h))
            throw std::invalid_argument("--g/--h disagree with the design file");
        return d;
    }
    if (f.g < 1 || f.h < 1)
        throw std::invalid_argument("need --cells FILE, or --g and --h with a cell rule");
    if (f.m > 0)
        return new_design(f.g, f.h, std::vector<int>(static_cast<std::size_t>(f.g) * f.h, f.m));
    if (f.mlo > 0) {
        if (f.mhi < f.mlo) throw std::invalid_argument("--mhi must be >= --mlo");
        return sample_design_uniform(f.g, f.h, f.mlo, f.mhi, f.seed);
    }
    if (f.m_L > 0 && f.delta >= 0.0)
        return sample_design_delta(f.g, f.h, f.m_L, f.delta, f.seed);
    throw std::invalid_argument("give --m, or --mlo/--mhi, or --mL/--delta to build cells");
}

// Streams to --out when set, else stdout.
class OutputTarget {
  public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

// --h is a model dimension, so the help flag stays long-form only.
CLI::App* add_subcommand(CLI::App& app, const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "print help and exit");
    return sub;
}

std::vector<std::pair<int, int>> parse_grid(const std::vector<std::string>& specs) {
    std::vector<std::pair<int, int>> grid;
    for (const std::string& spec : specs) {
        const auto x = spec.find('x');
        if (x == std::string::npos)
            throw std::invalid_argument("grid entry '" + spec + "' is not GxH");
        grid.emplace_back(std::stoi(spec.substr(0, x)), std::stoi(spec.substr(x + 1)));
    }
    return grid;
}

int run_spectrum(const DesignFlags& df, const ThetaFlags& tf, const std::string& out,
                 bool csv) {
    const Design d = resolve_design(df);
    const Spectrum s = eigenvalue_spectrum(d, tf.value());
    OutputTarget target(out);
    std::ostream& os = target.stream();
    if (csv) {
        os << "eigenvalue,value,multiplicity\n";
        os << "lambda0," << format_double(s.lambda0) << ',' << s.mult0 << '\n';
        os << "lambda7," << format_double(s.lambda7) << ',' << s.mult7 << '\n';
        os << "lambda3," << format_double(s.lambda3) << ',' << s.mult3 << '\n';
        os << "lambda5," << format_double(s.lambda5) << ',' << s.mult5 << '\n';
        os << "lambda1," << format_double(s.lambda1) << ',' << s.mult1 << '\n';
    } else {
        char line[128];
        os << "design: g=" << d.g << " h=" << d.h << " n=" << d.n << " m_U=" << d.m_U
           << " delta=" << format_double(d.delta) << '\n';
        std::snprintf(line, sizeof line, "%-10s %-22s %s\n", "eigenvalue", "value",
                      "multiplicity");
        os << line;
        const auto row = [&](const char* name, double v, std::int64_t mult) {
            std::snprintf(line, sizeof line, "%-10s %-22.15g %lld\n", name, v,
                          static_cast<long long>(mult));
            os << line;
        };
        row("lambda0", s.lambda0, s.mult0);
        row("lambda7", s.lambda7, s.mult7);
        row("lambda3", s.lambda3, s.mult3);
        row("lambda5", s.lambda5, s.mult5);
        row("lambda1", s.lambda1, s.mult1);
    }
    return 0;
}

int run_invert(const DesignFlags& df, const ThetaFlags& tf, const std::string& method,
               int r, const std::string& out, const std::string& matrix_out,
               std::int64_t cap, bool zero_elapsed) {
    const Design d = resolve_design(df);
    const VarianceComponents theta = tf.value();
    const MethodResult res = compute_inverse(d, theta, method, r);
    const CellBlockMatrix v = build_V(d, theta);

    double max_resid = 0.0;
    const double air_value = res.structured ? air(v, res.cbm, cap, &max_resid)
                                            : air_dense(v, res.dense, &max_resid);
    if (res.outside_theorem_hypothesis)
        std::cerr << "warning: imbalance delta=" << format_double(d.delta)
                  << " is outside the series guarantee (delta < 0.5)\n";

    OutputTarget target(out);
    std::ostream& os = target.stream();
    os << "# theta sa2=" << format_double(theta.sigma2_alpha)
       << " sb2=" << format_double(theta.sigma2_beta)
       << " sg2=" << format_double(theta.sigma2_gamma)
       << " se2=" << format_double(theta.sigma2_e)
       << (tf.defaulted ? " (defaults)" : "") << '\n';
    os << "method,g,h,n,delta,r,air,max_resid,elapsed_ms,outside_hypothesis\n";
    os << method << ',' << d.g << ',' << d.h << ',' << d.n << ','
       << format_double(d.delta) << ',' << (method == "neumann" ? r : -1) << ','
       << format_double(air_value) << ',' << format_double(max_resid) << ','
       << format_double(zero_elapsed ? 0.0 : res.elapsed_ms) << ','
       << (res.outside_theorem_hypothesis ? 1 : 0) << '\n';

    if (!matrix_out.empty()) {
        std::ofstream mos(matrix_out);
        if (!mos) throw std::invalid_argument("cannot open output file: " + matrix_out);
        const Matrix dense = res.structured ? cbm_to_dense(res.cbm) : res.dense;
        for (Eigen::Index i = 0; i < dense.rows(); ++i) {
            for (Eigen::Index j = 0; j < dense.cols(); ++j) {
                if (j) mos << ',';
                mos << format_double(dense(i, j));
            }
            mos << '\n';
        }
    }
    return 0;
}

int run_simulate(SimConfig cfg, const std::string& out) {
    const SimReport report =
        cfg.sim_case == SimCase::Case1 ? run_case1(cfg) : run_case2(cfg);
    OutputTarget target(out);
    write_csv(report, target.stream(), cfg.zero_elapsed);
    return 0;
}

int run_bench(const DesignFlags& df, const ThetaFlags& tf,
              std::vector<std::string> methods, int r, const std::string& out,
              std::int64_t cap, bool zero_elapsed) {
    const Design d = resolve_design(df);
    if (methods.empty()) {
        methods = {"exact-structured", "vcheck", "neumann", "asymptotic"};
        if (d.n <= 3000) {
            methods.push_back("exact-sm");
            methods.push_back("exact-dense");
        }
        if (d.balanced()) methods.push_back("balanced");
    }
    const std::vector<BenchRow> rows = bench_timing(d, tf.value(), methods, r, cap);
    OutputTarget target(out);
    std::ostream& os = target.stream();
    os << "method,g,h,n,elapsed_ms,air,max_resid\n";
    for (const BenchRow& row : rows)
        os << row.method << ',' << row.g << ',' << row.h << ',' << row.n << ','
           << format_double(zero_elapsed ? 0.0 : row.elapsed_ms) << ','
           << format_double(row.air) << ',' << format_double(row.max_resid) << '\n';
    return 0;
}

struct SuiteResult {
    std::string name;
    int instances = 0;
    double worst = 0.0;
    bool pass = false;
};

int run_verify(const std::string& suite, int instances, std::uint64_t seed) {
    if (instances < 1) throw std::invalid_argument("--instances must be >= 1");
    const auto want = [&](const char* name) { return suite == "all" || suite == name; };
    std::vector<SuiteResult> results;

    const auto sample_small = [&](std::uint64_t s, int max_gh, int max_m) {
        std::mt19937_64 eng(s);
        const int g = 2 + static_cast<int>(eng() % static_cast<std::uint64_t>(max_gh - 1));
        const int h = 2 + static_cast<int>(eng() % static_cast<std::uint64_t>(max_gh - 1));
        return sample_design_uniform(g, h, 1, max_m, eng());
    };

    if (want("lemma1")) {
        SuiteResult res{"lemma1", instances, 0.0, false};
        for (int i = 0; i < instances; ++i) {
            const std::uint64_t s = mix_seed(seed, {0xa1, static_cast<std::uint64_t>(i)});
            res.worst = std::max(res.worst, check_lemma1(sample_small(s, 5, 4), s).worst());
        }
        res.pass = res.worst <= 1e-12;
        results.push_back(res);
    }
    if (want("lemma2")) {
        SuiteResult res{"lemma2", instances, 0.0, false};
        for (int i = 0; i < instances; ++i) {
            const std::uint64_t s = mix_seed(seed, {0xa2, static_cast<std::uint64_t>(i)});
            res.worst = std::max(res.worst, check_lemma2(sample_small(s, 5, 4), s).worst());
        }
        res.pass = res.worst <= 1e-12;
        results.push_back(res);
    }
    if (want("lemma3")) {
        SuiteResult res{"lemma3", instances, 0.0, true};
        for (int i = 0; i < instances; ++i) {
            const std::uint64_t s = mix_seed(seed, {0xa3, static_cast<std::uint64_t>(i)});
            const Lemma3Report rep = check_lemma3(20, s);
            res.worst = std::max(res.worst, rep.max_violation);
            res.pass = res.pass && rep.inequality_ok && rep.strict_ok;
        }
        results.push_back(res);
    }
    if (want("lemma4")) {
        SuiteResult res{"lemma4", instances, 0.0, true};
        for (int i = 0; i < instances; ++i) {
            const std::uint64_t s = mix_seed(seed, {0xa4, static_cast<std::uint64_t>(i)});
            const Lemma4Report rep = check_lemma4(sample_small(s, 5, 4), 4);
            res.worst = std::max(res.worst, rep.max_violation);
            res.pass = res.pass && rep.ok;
        }
        results.push_back(res);
    }
    if (want("lemma5")) {
        SuiteResult res{"lemma5", instances,
                        -std::numeric_limits<double>::infinity(), true};
        for (int i = 0; i < instances; ++i) {
            std::mt19937_64 eng(mix_seed(seed, {0xa5, static_cast<std::uint64_t>(i)}));
            const double d2 = 1.0 + 2.0 * (static_cast<double>(eng() >> 11) * 0x1p-53) + 1e-6;
            const double eps = 0.1 + 0.8 * (static_cast<double>(eng() >> 11) * 0x1p-53);
            const Lemma5Report rep = check_lemma5(d2, eps);
            res.worst = std::max({-rep.lower_margin, -rep.upper_margin, res.worst});
            res.pass = res.pass && rep.ok;
        }
        res.pass = res.pass && check_lemma5(1.0001, 0.5).ok && check_lemma5(2.0, 0.9).ok;
        results.push_back(res);
    }
    if (want("spectral")) {
        SuiteResult res{"spectral", instances, 0.0, true};
        for (int i = 0; i < instances; ++i) {
            const std::uint64_t s = mix_seed(seed, {0xa6, static_cast<std::uint64_t>(i)});
            std::mt19937_64 eng(s);
            const auto u = [&](double lo, double hi) {
                return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1p-53);
            };
            const int g = 2 + static_cast<int>(eng() % 5);
            const int h = 2 + static_cast<int>(eng() % 5);
            const Design d = sample_design_uniform(g, h, 1, 8, eng());
            const VarianceComponents theta{u(0.1, 10.0), u(0.1, 10.0), u(0.1, 10.0),
                                           u(0.1, 10.0)};
            const DiagonalizationReport rep = verify_diagonalization(d, theta, 1e-10);
            res.worst = std::max({res.worst, rep.residual_max, rep.eig_mismatch});
            res.pass = res.pass && rep.ok;
        }
        results.push_back(res);
    }
    if (results.empty()) throw std::invalid_argument("unknown suite: " + suite);

    bool all_pass = true;
    char line[128];
    std::snprintf(line, sizeof line, "%-10s %-10s %-14s %s\n", "suite", "instances",
                  "worst", "status");
    std::cout << line;
    for (const SuiteResult& res : results) {
        std::snprintf(line, sizeof line, "%-10s %-10d %-14.3g %s\n", res.name.c_str(),
                      res.instances, res.worst, res.pass ? "pass" : "FAIL");
        std::cout << line;
        all_pass = all_pass && res.pass;
    }
    return all_pass ? 0 : 1;
}

void apply_config(CLI::App* sub, const std::string& path, std::string& case_name,
                  std::vector<std::string>& grid_specs, SimConfig& cfg,
                  ThetaFlags& tf, DesignFlags& df, std::string& out) {
    const auto kv = read_config_file(path);
    const auto unset = [&](const char* flag) { return sub->count(flag) == 0; };
    const auto get = [&](const char* key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    const auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) parts.push_back(item);
        return parts;
    };
    if (const auto v = get("case"); v && case_name.empty()) case_name = *v;
    if (const auto v = get("grid"); v && unset("--grid")) grid_specs = split(*v);
    if (const auto v = get("g"); v && unset("--g")) df.g = std::stoi(*v);
    if (const auto v = get("h"); v && unset("--h")) df.h = std::stoi(*v);
    if (const auto v = get("lo"); v && unset("--lo")) cfg.lo = std::stoi(*v);
    if (const auto v = get("hi"); v && unset("--hi")) cfg.hi = std::stoi(*v);
    if (const auto v = get("mL"); v && unset("--mL")) {
        cfg.m_L_list.clear();
        for (const auto& p : split(*v)) cfg.m_L_list.push_back(std::stoi(p));
    }
    if (const auto v = get("delta"); v && unset("--delta")) {
        cfg.delta_list.clear();
        for (const auto& p : split(*v)) cfg.delta_list.push_back(std::stod(p));
    }
    if (const auto v = get("r"); v && unset("--r")) {
        cfg.r_list.clear();
        for (const auto& p : split(*v)) cfg.r_list.push_back(std::stoi(p));
    }
    if (const auto v = get("N"); v && unset("--N")) cfg.replicates = std::stoi(*v);
    if (const auto v = get("seed"); v && unset("--seed")) cfg.seed = std::stoull(*v);
    if (const auto v = get("sa2"); v && unset("--sa2")) tf.sa2 = std::stod(*v);
    if (const auto v = get("sb2"); v && unset("--sb2")) tf.sb2 = std::stod(*v);
    if (const auto v = get("sg2"); v && unset("--sg2")) tf.sg2 = std::stod(*v);
    if (const auto v = get("se2"); v && unset("--se2")) tf.se2 = std::stod(*v);
    if (const auto v = get("cap"); v && unset("--cap")) cfg.dense_air_cap = std::stoll(*v);
    if (const auto v = get("threads"); v && unset("--threads")) cfg.threads = std::stoi(*v);
    if (const auto v = get("zero_elapsed"); v && unset("--zero-elapsed"))
        cfg.zero_elapsed = (*v == "1" || *v == "true");
    if (const auto v = get("out"); v && unset("--out")) out = *v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structured covariance inverses for two-way crossed random effects"};
    app.require_subcommand(1);
    // --h is a model dimension here, so help stays long-form only.
    app.set_help_flag("--help", "print help and exit");

    // invert
    auto* invert = add_subcommand(app, "invert", "invert one covariance matrix");
    DesignFlags invert_df;
    ThetaFlags invert_tf;
    std::string invert_method;
    int invert_r = 2;
    std::string invert_out, invert_matrix_out;
    std::int64_t invert_cap = 5000;
    bool invert_zero_elapsed = false;
    add_design_flags(invert, invert_df);
    add_theta_flags(invert, invert_tf);
    invert
        ->add_option("--method", invert_method,
                     "exact-dense | exact-structured | exact-sm | vcheck | asymptotic | "
                     "neumann | balanced")
        ->required();
    invert->add_option("--r", invert_r, "series order for neumann")->capture_default_str();
    invert->add_option("--out", invert_out, "residual report path (default stdout)");
    invert->add_option("--matrix-out", invert_matrix_out, "write the dense inverse as CSV");
    invert->add_option("--cap", invert_cap, "dense residual cap on n")->capture_default_str();
    invert->add_flag("--zero-elapsed", invert_zero_elapsed, "write elapsed_ms as 0");

    // spectrum
    auto* spectrum = add_subcommand(app, "spectrum", "closed-form eigenvalue table");
    DesignFlags spectrum_df;
    ThetaFlags spectrum_tf;
    std::string spectrum_out;
    bool spectrum_csv = false;
    add_design_flags(spectrum, spectrum_df);
    add_theta_flags(spectrum, spectrum_tf);
    spectrum->add_option("--out", spectrum_out, "output path (default stdout)");
    spectrum->add_flag("--csv", spectrum_csv, "emit CSV instead of a table");

    // simulate
    auto* simulate = add_subcommand(app, "simulate", "replicate accuracy experiments");
    std::string sim_case_name;
    std::vector<std::string> sim_grid_specs;
    SimConfig sim_cfg;
    ThetaFlags sim_tf;
    DesignFlags sim_df;  // only g/h used
    std::string sim_out, sim_config_path;
    simulate->add_option("case", sim_case_name, "case1 (growing grids) or case2 (series orders)");
    simulate->add_option("--config", sim_config_path, "key=value config file (flags win)");
    simulate->add_option("--grid", sim_grid_specs, "grid as GxH[,GxH...]")->delimiter(',');
    simulate->add_option("--g", sim_df.g, "grid rows (single-pair shorthand)");
    simulate->add_option("--h", sim_df.h, "grid columns (single-pair shorthand)");
    simulate->add_option("--lo", sim_cfg.lo, "case1 cell lower bound")->capture_default_str();
    simulate->add_option("--hi", sim_cfg.hi, "case1 cell upper bound")->capture_default_str();
    simulate->add_option("--mL", sim_cfg.m_L_list, "case2 smallest cell counts")->delimiter(',');
    simulate->add_option("--delta", sim_cfg.delta_list, "case2 imbalance targets")->delimiter(',');
    simulate->add_option("--r", sim_cfg.r_list, "case2 series orders")->delimiter(',');
    simulate->add_option("--N", sim_cfg.replicates, "replicates per setting")->capture_default_str();
    simulate->add_option("--seed", sim_cfg.seed, "master seed")->capture_default_str();
    add_theta_flags(simulate, sim_tf);
    simulate->add_option("--cap", sim_cfg.dense_air_cap, "dense residual cap on n")
        ->capture_default_str();
    simulate->add_option("--threads", sim_cfg.threads, "worker cap (runner is sequential)")
        ->capture_default_str();
    simulate->add_flag("--zero-elapsed", sim_cfg.zero_elapsed, "write elapsed_ms as 0");
    simulate->add_option("--out", sim_out, "CSV path (default stdout)");

    // verify
    auto* verify = add_subcommand(app, "verify", "run identity and inequality suites");
    std::string verify_suite = "all";
    int verify_instances = 50;
    std::uint64_t verify_seed = 1;
    verify->add_option("--suite", verify_suite,
                       "lemma1|lemma2|lemma3|lemma4|lemma5|spectral|all")
        ->capture_default_str();
    verify->add_option("--instances", verify_instances, "instances per suite")
        ->capture_default_str();
    verify->add_option("--seed", verify_seed, "suite seed")->capture_default_str();

    // bench
    auto* bench = add_subcommand(app, "bench", "time the inverse constructions");
    DesignFlags bench_df;
    ThetaFlags bench_tf;
    std::vector<std::string> bench_methods;
    int bench_r = 2;
    std::string bench_out;
    std::int64_t bench_cap = 5000;
    bool bench_zero_elapsed = false;
    add_design_flags(bench, bench_df);
    add_theta_flags(bench, bench_tf);
    bench->add_option("--methods", bench_methods, "comma-separated method names")
        ->delimiter(',');
    bench->add_option("--r", bench_r, "series order for neumann")->capture_default_str();
    bench->add_option("--cap", bench_cap, "dense residual cap on n")->capture_default_str();
    bench->add_flag("--zero-elapsed", bench_zero_elapsed, "write elapsed_ms as 0");
    bench->add_option("--out", bench_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (invert->parsed()) {
            finish_theta(invert, invert_tf);
            return run_invert(invert_df, invert_tf, invert_method, invert_r, invert_out,
                              invert_matrix_out, invert_cap, invert_zero_elapsed);
        }
        if (spectrum->parsed()) {
            finish_theta(spectrum, spectrum_tf);
            return run_spectrum(spectrum_df, spectrum_tf, spectrum_out, spectrum_csv);
        }
        if (simulate->parsed()) {
            if (!sim_config_path.empty())
                apply_config(simulate, sim_config_path, sim_case_name, sim_grid_specs,
                             sim_cfg, sim_tf, sim_df, sim_out);
            finish_theta(simulate, sim_tf);
            sim_cfg.theta = sim_tf.value();
            if (sim_case_name == "case1") {
                sim_cfg.sim_case = SimCase::Case1;
                sim_cfg.method = Method::Asymptotic;
            } else if (sim_case_name == "case2") {
                sim_cfg.sim_case = SimCase::Case2;
                sim_cfg.method = Method::Neumann;
            } else {
                throw std::invalid_argument("case must be case1 or case2");
            }
            if (!sim_grid_specs.empty())
                sim_cfg.grid = parse_grid(sim_grid_specs);
            else if (sim_df.g > 0 && sim_df.h > 0)
                sim_cfg.grid = {{sim_df.g, sim_df.h}};
            else if (sim_cfg.sim_case == SimCase::Case1)
                sim_cfg.grid = {{10, 15}, {20, 25}, {50, 45}};
            else
                sim_cfg.grid = {{10, 15}};
            if (sim_cfg.sim_case == SimCase::Case2) {
                if (sim_cfg.m_L_list.empty()) sim_cfg.m_L_list = {10};
                if (sim_cfg.delta_list.empty()) sim_cfg.delta_list = {0.25};
                if (sim_cfg.r_list.empty()) sim_cfg.r_list = {0, 1, 2, 3, 4, 5};
            }
            return run_simulate(sim_cfg, sim_out);
        }
        if (verify->parsed()) return run_verify(verify_suite, verify_instances, verify_seed);
        if (bench->parsed()) {
            finish_theta(bench, bench_tf);
            return run_bench(bench_df, bench_tf, bench_methods, bench_r, bench_out,
                             bench_cap, bench_zero_elapsed);
        }
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
