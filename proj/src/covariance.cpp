#include "crossinv/covariance.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace crossinv {

void validate(const VarianceComponents& theta) {
    if (!(theta.sigma2_alpha >= 0.0) || !(theta.sigma2_beta >= 0.0) ||
        !(theta.sigma2_gamma >= 0.0))
        throw std::invalid_argument("variance components must be nonnegative");
    if (!(theta.sigma2_e > 0.0))
        throw std::invalid_argument("observation variance must be positive");
}

namespace {

// gh x gh pattern S with S_{cc'} = sa2*1(i=i') + sb2*1(j=j') + sg2*1(c=c'),
// cells in row-major order.
Matrix kron_pattern(const Design& d, const VarianceComponents& theta) {
    const Eigen::Index gh = static_cast<Eigen::Index>(d.num_cells());
    Matrix s = Matrix::Zero(gh, gh);
    for (int i = 0; i < d.g; ++i)
        for (int j = 0; j < d.h; ++j) {
            const Eigen::Index c = static_cast<Eigen::Index>(d.flat_index(i, j));
            for (int j2 = 0; j2 < d.h; ++j2)
                s(c, static_cast<Eigen::Index>(d.flat_index(i, j2))) += theta.sigma2_alpha;
            for (int i2 = 0; i2 < d.g; ++i2)
                s(c, static_cast<Eigen::Index>(d.flat_index(i2, j))) += theta.sigma2_beta;
            s(c, c) += theta.sigma2_gamma;
        }
    return s;
}

}  // namespace

CellBlockMatrix build_D(const Design& d, const VarianceComponents& theta) {
    validate(theta);
    const Eigen::Index gh = static_cast<Eigen::Index>(d.num_cells());
    Vector m(gh);
    for (Eigen::Index c = 0; c < gh; ++c)
        m(c) = static_cast<double>(d.cells[static_cast<std::size_t>(c)]);
    CellBlockMatrix out;
    out.design = d;
    out.norm = Norm::Bar;
    out.diag = Vector::Zero(gh);
    out.kernel = m.asDiagonal() * kron_pattern(d, theta) * m.asDiagonal();
    return out;
}

CellBlockMatrix build_V(const Design& d, const VarianceComponents& theta) {
    CellBlockMatrix out = build_D(d, theta);
    out.diag.array() += theta.sigma2_e;
    return out;
}

CellBlockMatrix build_V_check(const Design& d, const VarianceComponents& theta) {
    CellBlockMatrix out = build_D(d, theta);
    const double scale = theta.sigma2_e / static_cast<double>(d.m_U);
    for (Eigen::Index c = 0; c < out.diag.size(); ++c)
        out.diag(c) = scale * static_cast<double>(d.cells[static_cast<std::size_t>(c)]);
    return out;
}

Vector build_I_delta(const Design& d) {
    const Eigen::Index gh = static_cast<Eigen::Index>(d.num_cells());
    Vector w(gh);
    for (Eigen::Index c = 0; c < gh; ++c)
        w(c) = 1.0 - static_cast<double>(d.cells[static_cast<std::size_t>(c)]) /
                         static_cast<double>(d.m_U);
    return w;
}

namespace {

// Gaussian stream with an engine whose output is pinned by the standard, so
// draws are identical across platforms (std::normal_distribution is not).
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // Box-Muller on u1 in (0,1], u2 in [0,1).
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

Vector sample_responses(const Design& d, const VarianceComponents& theta,
                        double mu, std::uint64_t seed) {
    validate(theta);
    GaussianStream gs(seed);
    const double sa = std::sqrt(theta.sigma2_alpha);
    const double sb = std::sqrt(theta.sigma2_beta);
    const double sg = std::sqrt(theta.sigma2_gamma);
    const double se = std::sqrt(theta.sigma2_e);

    Vector row(d.g), col(d.h), inter(static_cast<Eigen::Index>(d.num_cells()));
    for (Eigen::Index i = 0; i < row.size(); ++i) row(i) = sa * gs.next();
    for (Eigen::Index j = 0; j < col.size(); ++j) col(j) = sb * gs.next();
    for (Eigen::Index c = 0; c < inter.size(); ++c) inter(c) = sg * gs.next();

    Vector y(static_cast<Eigen::Index>(d.n));
    Eigen::Index pos = 0;
    for (int i = 0; i < d.g; ++i)
        for (int j = 0; j < d.h; ++j) {
            const double cell_mean =
                mu + row(i) + col(j) + inter(static_cast<Eigen::Index>(d.flat_index(i, j)));
            const int mc = d.cell(i, j);
            for (int k = 0; k < mc; ++k) y(pos++) = cell_mean + se * gs.next();
        }
    return y;
}

}  // namespace crossinv
