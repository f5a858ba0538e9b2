#include <algorithm>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pdrank/errors.hpp"
#include "pdrank/metrics.hpp"
#include "pdrank/random.hpp"

using namespace pdrank;

namespace {

Ranking ranking_of(std::vector<std::size_t> order) {
    return Ranking(std::move(order));
}

std::vector<std::size_t> identity(std::size_t m) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    return order;
}

void check_pair(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    const auto ra = ranking_of(a);
    const auto rb = ranking_of(b);
    const double tau = kendall_tau(ra, rb);
    ASSERT_EQ(tau, oracle::kendall_tau_pairs(a, b));
    ASSERT_EQ(tau, kendall_tau(rb, ra));
    const auto counts = kendall_counts(ra, rb);
    ASSERT_EQ(counts.concordant + counts.discordant, a.size() * (a.size() - 1) / 2);
    ASSERT_GE(tau, -1.0);
    ASSERT_LE(tau, 1.0);
}

}  // namespace

TEST(KendallTau, Examples) {
    const auto r = ranking_of({0, 1, 2, 3});
    EXPECT_EQ(kendall_tau(r, r), 1.0);
    EXPECT_EQ(kendall_tau(r, r.reversed()), -1.0);
    const auto swapped = ranking_of({1, 0, 2, 3});
    EXPECT_DOUBLE_EQ(kendall_tau(r, swapped), 4.0 / 6.0);
    EXPECT_NEAR(kendall_tau(r, swapped), 0.6667, 1e-4);
    const auto counts = kendall_counts(r, swapped);
    EXPECT_EQ(counts.concordant, 5u);
    EXPECT_EQ(counts.discordant, 1u);
    EXPECT_EQ(kendall_tau(ranking_of({0}), ranking_of({0})), 1.0);
    EXPECT_THROW((void)kendall_tau(r, ranking_of({0, 1, 2})), ConfigError);
}

TEST(KendallTau, ExhaustiveUpToSixItems) {
    for (std::size_t m = 1; m <= 6; ++m) {
        auto a = identity(m);
        do {
            const auto ra = ranking_of(a);
            ASSERT_EQ(kendall_tau(ra, ra), 1.0);
            if (m >= 2) {
                ASSERT_EQ(kendall_tau(ra, ra.reversed()), -1.0);
            }
            auto b = identity(m);
            do {
                check_pair(a, b);
            } while (std::next_permutation(b.begin(), b.end()));
        } while (std::next_permutation(a.begin(), a.end()));
    }
}

TEST(KendallTau, RandomPermutationsMatchPairEnumeration) {
    Rng rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = 2 + rng.index(49);
        auto a = identity(m);
        auto b = identity(m);
        rng.shuffle(std::span<std::size_t>(a));
        rng.shuffle(std::span<std::size_t>(b));
        check_pair(a, b);
        const auto ra = ranking_of(a);
        ASSERT_EQ(kendall_tau(ra, ra), 1.0);
        ASSERT_EQ(kendall_tau(ra, ra.reversed()), -1.0);
    }
}

TEST(KendallTau, LargeRankingUsesExactCounts) {
    const std::size_t m = 100000;
    auto order = identity(m);
    const auto base = ranking_of(order);
    std::swap(order[0], order[m - 1]);
    const auto counts = kendall_counts(base, ranking_of(order));
    // swapping the ends inverts the pair itself plus 2 (m - 2) pairs through the middle
    EXPECT_EQ(counts.discordant, 2 * (m - 2) + 1);
    EXPECT_EQ(counts.concordant + counts.discordant, m * (m - 1) / 2);
}

TEST(LabelAccuracy, Examples) {
    const auto d = ComparisonDataset::from_entries(3, {{0, 1, 1, 2}, {1, 2, -1, 1}, {0, 2, 1, 1}});
    const std::vector<double> truth{3.0, 2.0, 1.0};
    EXPECT_EQ(label_accuracy(truth, d, truth), 1.0);
    EXPECT_EQ(label_accuracy(std::vector<double>{1.0, 2.0, 3.0}, d, truth), 0.0);
    EXPECT_EQ(label_accuracy(std::vector<double>{1.0, 1.0, 1.0}, d, truth), 0.0);
    // items 0 and 1 swapped: the pair (0,1) with multiplicity 2 is misordered
    EXPECT_DOUBLE_EQ(label_accuracy(std::vector<double>{2.0, 3.0, 1.0}, d, truth), 0.5);
    EXPECT_EQ(label_accuracy(truth, ComparisonDataset::from_entries(3, {}), truth), 0.0);
    EXPECT_THROW((void)label_accuracy(std::vector<double>{1.0}, d, truth), ConfigError);
}
