#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace crossinv {

// Unbalanced two-way layout: g row levels, h column levels, m_ij observations
// in cell (i,j). Cells are stored row-major with the column index fastest, so
// cell (i,j) sits at flat index i*h + j (0-based).
struct Design {
    int g = 0;
    int h = 0;
    std::vector<int> cells;  // size g*h, cells[i*h + j] = m_ij
    std::int64_t n = 0;      // total observations
    int m_L = 0;             // min cell size
    int m_U = 0;             // max cell size
    double delta = 0.0;      // (m_U - m_L) / m_U, in [0, 1)

    int flat_index(int i, int j) const { return i * h + j; }
    int cell(int i, int j) const { return cells[flat_index(i, j)]; }
    int num_cells() const { return g * h; }
    bool balanced() const { return m_L == m_U; }
};

bool operator==(const Design& a, const Design& b);

Design new_design(int g, int h, const std::vector<int>& cells_flat);
Design new_design(int g, int h, const std::vector<std::vector<int>>& cells);

// Each m_ij drawn independently from the discrete uniform distribution on
// {lo, ..., hi}; deterministic given the seed.
Design sample_design_uniform(int g, int h, int lo, int hi, std::uint64_t seed);

// Each m_ij drawn from {m_L, ..., floor(m_L / (1 - delta_target))}. The
// realized unbalance of the sampled design is reported in Design::delta and
// is generally at or below the target.
Design sample_design_delta(int g, int h, int m_L, double delta_target,
                           std::uint64_t seed);

// Plain-text format: line 1 holds "g h", then g lines of h integers each.
Design read_design(std::istream& in);
Design load_design(const std::string& path);
void write_design(std::ostream& out, const Design& d);

// Prefix sums of cell sizes: offsets[c] is the first observation index of
// cell c, offsets[g*h] == n.
std::vector<std::int64_t> cell_offsets(const Design& d);

// splitmix64 step, the building block for all derived-seed chains.
std::uint64_t splitmix64(std::uint64_t x);

// Canonical per-replicate seed derivation: fold each component into the
// running state with splitmix64. Deterministic and order-sensitive.
std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts);

}  // namespace crossinv
