#pragma once
#include <array>
#include <cstdint>

#include "crossinv/cell_block.hpp"
#include "crossinv/design.hpp"

namespace crossinv {

// Five product identities of the blockwise algebra, checked on random
// P, R (g x g), Q, S (h x h), a (g), b (h), and a random per-size weight
// function f. Left sides are assembled densely from Khatri-Rao factors,
// right sides come from the compressed closed forms.
struct Lemma1Report {
    std::array<double, 5> max_discrepancy{};
    double worst() const;
};

Lemma1Report check_lemma1(const Design& d, std::uint64_t seed);

// Bilinearity in each slot plus the four inner/outer/matrix product
// formulas for row-partitioned vector factors against dense assembly.
struct Lemma2Report {
    double bilinearity = 0.0;
    std::array<double, 4> products{};
    double worst() const;
};

Lemma2Report check_lemma2(const Design& d, std::uint64_t seed);

// Entrywise monotonicity of nonnegative matrix products: A <= C implies
// A B <= C B, with strictness when C - A has a positive entry per row
// hitting a positive entry of B in every column.
struct Lemma3Report {
    bool inequality_ok = false;
    bool strict_ok = false;
    double max_violation = 0.0;  // largest entry of A B - C B
};

Lemma3Report check_lemma3(int dimension, std::uint64_t seed);

// Powers of the three-term averaging operator stay entrywise below the
// closed bound with coefficients 1/m_L^(l-1) and (3^l - 2)/m_L^(l-1).
struct Lemma4Report {
    int l_max = 0;
    double max_violation = 0.0;
    bool ok = false;
};

Lemma4Report check_lemma4(const Design& d, int l_max);

// Sandwich bound d2^sqrt(log g) / g between g^(-1-eps) and g^(-1+eps):
// the upper bound from the threshold G_eps = exp((log d2)^2 / eps^2) up,
// the lower bound for every g > 1. Margins are reported in log scale;
// nonnegative means the bound holds.
struct Lemma5Report {
    double g_epsilon = 0.0;
    double g_lo = 0.0;
    double g_hi = 0.0;
    int grid_points = 0;
    double lower_margin = 0.0;
    double upper_margin = 0.0;
    bool ok = false;
};

Lemma5Report check_lemma5(double d2, double epsilon);

}  // namespace crossinv
