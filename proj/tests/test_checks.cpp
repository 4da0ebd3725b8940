#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crossinv/checks.hpp"
#include "support.hpp"

using namespace crossinv;

TEST_CASE("blockwise product identities hold to rounding error") {
    for (const Design& d : {testutil::worked_design(),
                            new_design(3, 3, std::vector<int>(9, 2)),
                            sample_design_uniform(4, 5, 1, 5, 61)}) {
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            const Lemma1Report rep = check_lemma1(d, seed);
            CHECK(rep.worst() <= 1e-12);
            for (double v : rep.max_discrepancy) CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("bilinear form identities hold to rounding error") {
    for (const Design& d : {testutil::worked_design(),
                            new_design(2, 4, std::vector<int>(8, 3)),
                            sample_design_uniform(3, 4, 1, 5, 62)}) {
        for (std::uint64_t seed : {4ULL, 5ULL}) {
            const Lemma2Report rep = check_lemma2(d, seed);
            CHECK(rep.bilinearity <= 1e-12);
            CHECK(rep.worst() <= 1e-12);
        }
    }
}

TEST_CASE("entrywise monotonicity of nonnegative products") {
    for (int dim : {2, 5, 8}) {
        for (std::uint64_t seed : {7ULL, 8ULL}) {
            const Lemma3Report rep = check_lemma3(dim, seed);
            CHECK(rep.inequality_ok);
            CHECK(rep.strict_ok);
            CHECK(rep.max_violation <= 1e-12);
        }
    }
}

TEST_CASE("averaging-operator powers stay below the closed bound") {
    for (const Design& d : {testutil::worked_design(),
                            new_design(3, 3, std::vector<int>(9, 2)),
                            sample_design_uniform(4, 4, 1, 5, 63)}) {
        const Lemma4Report rep = check_lemma4(d, 4);
        CHECK(rep.ok);
        CHECK(rep.l_max == 4);
        CHECK(rep.max_violation <= 1e-12);
    }
}

TEST_CASE("subpolynomial sandwich bound") {
    SUBCASE("decay base close to one") {
        const Lemma5Report rep = check_lemma5(1.0001, 0.5);
        CHECK(rep.ok);
        CHECK(rep.grid_points > 0);
        CHECK(rep.lower_margin >= -1e-9);
        CHECK(rep.upper_margin >= -1e-9);
        // (log d2)^2 / eps^2 is tiny, so the threshold sits next to 1.
        CHECK(rep.g_epsilon < 1.001);
    }
    SUBCASE("large base, loose exponent") {
        const Lemma5Report rep = check_lemma5(2.0, 0.9);
        CHECK(rep.ok);
        CHECK(rep.g_epsilon == doctest::Approx(1.80967).epsilon(1e-4));
    }
    SUBCASE("tight exponent pushes the threshold out") {
        const Lemma5Report rep = check_lemma5(1.5, 0.25);
        CHECK(rep.ok);
        CHECK(rep.g_epsilon == doctest::Approx(13.8796).epsilon(1e-4));
        CHECK(rep.g_hi > rep.g_lo);
    }
}
