#include "crossinv/design.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace crossinv {

bool operator==(const Design& a, const Design& b) {
    return a.g == b.g && a.h == b.h && a.cells == b.cells;
}

Design new_design(int g, int h, const std::vector<int>& cells_flat) {
    if (g < 1 || h < 1)
        throw std::invalid_argument("design: grid dimensions must be positive");
    if (static_cast<int>(cells_flat.size()) != g * h)
        throw std::invalid_argument("design: expected g*h cell counts");
    Design d;
    d.g = g;
    d.h = h;
    d.cells = cells_flat;
    d.m_L = d.cells[0];
    d.m_U = d.cells[0];
    for (int m : d.cells) {
        if (m < 1)
            throw std::invalid_argument("design: every cell count must be >= 1");
        d.n += m;
        d.m_L = std::min(d.m_L, m);
        d.m_U = std::max(d.m_U, m);
    }
    d.delta = static_cast<double>(d.m_U - d.m_L) / d.m_U;
    return d;
}

Design new_design(int g, int h, const std::vector<std::vector<int>>& cells) {
    if (static_cast<int>(cells.size()) != g)
        throw std::invalid_argument("design: expected g rows of cell counts");
    std::vector<int> flat;
    flat.reserve(static_cast<std::size_t>(g) * h);
    for (const auto& row : cells) {
        if (static_cast<int>(row.size()) != h)
            throw std::invalid_argument("design: expected h cells per row");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return new_design(g, h, flat);
}

namespace {

// Discrete uniform on {lo..hi} from raw 64-bit draws. The modulo bias is
// below 2^-57 for the ranges used here and the mapping is identical on
// every platform, unlike std::uniform_int_distribution.
int draw_int(std::mt19937_64& rng, int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(rng() % span);
}

}  // namespace

Design sample_design_uniform(int g, int h, int lo, int hi, std::uint64_t seed) {
    if (lo < 1 || lo > hi)
        throw std::invalid_argument("design: need 1 <= lo <= hi");
    std::mt19937_64 rng(seed);
    std::vector<int> cells(static_cast<std::size_t>(g) * h);
    for (auto& m : cells) m = draw_int(rng, lo, hi);
    return new_design(g, h, cells);
}

Design sample_design_delta(int g, int h, int m_L, double delta_target,
                           std::uint64_t seed) {
    if (m_L < 1)
        throw std::invalid_argument("design: m_L must be >= 1");
    if (!(delta_target >= 0.0 && delta_target < 1.0))
        throw std::invalid_argument("design: delta target must lie in [0, 1)");
    const int hi = static_cast<int>(std::floor(m_L / (1.0 - delta_target)));
    return sample_design_uniform(g, h, m_L, hi, seed);
}

Design read_design(std::istream& in) {
    int g = 0, h = 0;
    if (!(in >> g >> h))
        throw std::invalid_argument("design file: missing grid dimensions");
    if (g < 1 || h < 1)
        throw std::invalid_argument("design file: grid dimensions must be positive");
    std::vector<int> cells(static_cast<std::size_t>(g) * h);
    for (auto& m : cells)
        if (!(in >> m))
            throw std::invalid_argument("design file: expected g*h cell counts");
    return new_design(g, h, cells);
}

Design load_design(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("design file: cannot open " + path);
    return read_design(in);
}

void write_design(std::ostream& out, const Design& d) {
    out << d.g << ' ' << d.h << '\n';
    for (int i = 0; i < d.g; ++i) {
        for (int j = 0; j < d.h; ++j)
            out << d.cell(i, j) << (j + 1 < d.h ? ' ' : '\n');
    }
}

std::vector<std::int64_t> cell_offsets(const Design& d) {
    std::vector<std::int64_t> off(static_cast<std::size_t>(d.num_cells()) + 1, 0);
    for (int c = 0; c < d.num_cells(); ++c) off[c + 1] = off[c] + d.cells[c];
    return off;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = splitmix64(seed);
    for (std::uint64_t p : parts) s = splitmix64(s ^ p);
    return s;
}

}  // namespace crossinv
