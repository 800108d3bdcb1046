#include <gtest/gtest.h>

#include "jtri/errors.hpp"
#include "jtri/matcore.hpp"
#include "jtri/multicast.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace jtri;
using jtri::testing::random_matrix;
using jtri::testing::random_psd;

namespace {

ChannelPair fig4_pair() {
    return {Channel(ComplexMatrix::diagonal(std::vector<double>{1.0, 10.0})),
            Channel(ComplexMatrix::diagonal(std::vector<double>{2.0, 2.0}))};
}

// Single-user capacity by water-filling over the eigen-gains of H^H H (Eigen oracle).
double water_filling_capacity(const ComplexMatrix& h, double p) {
    const auto gains = jtri::testing::oracle_singular_values(h);
    std::vector<double> g;
    for (double s : gains) {
        if (s > 1e-12) {
            g.push_back(s * s);
        }
    }
    for (std::size_t k = g.size(); k > 0; --k) {
        double inv = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            inv += 1.0 / g[i];
        }
        const double level = (p + inv) / static_cast<double>(k);
        if (level - 1.0 / g[k - 1] >= 0.0) {
            double c = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                c += std::log2(level * g[i]);
            }
            return c;
        }
    }
    return 0.0;
}

} // namespace

TEST(ChannelPair, RejectsMismatchedInputs) {
    EXPECT_THROW(ChannelPair(Channel(ComplexMatrix(2, 2)), Channel(ComplexMatrix(2, 3))), DimensionMismatch);
}

TEST(CompoundMi, Examples) {
    std::mt19937_64 rng(401);
    const Channel h(random_matrix(rng, 2, 2));
    const auto cx = InputCovariance::scaled_identity(2, 2.0);
    EXPECT_DOUBLE_EQ(compound_mi(ChannelPair(h, h), cx), mutual_information(h, cx));
    EXPECT_EQ(compound_mi(ChannelPair(h, Channel(ComplexMatrix(3, 2))), cx), 0.0);
    EXPECT_NEAR(compound_mi(fig4_pair(), InputCovariance::diagonal({0.5, 0.5}, 1.0)), std::log2(9.0), 1e-13);
    EXPECT_NEAR(std::log2(9.0), 3.1699, 1e-4);
}

TEST(OptimizeCovariance, SymmetricPairGivesScaledIdentity) {
    const Channel eye(ComplexMatrix::identity(2));
    const auto opt = optimize_covariance(ChannelPair(eye, eye), 2.0);
    EXPECT_LE(distance(opt.cx.c(), ComplexMatrix::identity(2)), 1e-6);
    EXPECT_NEAR(opt.objective, 2.0, 1e-9);
    EXPECT_TRUE(opt.converged);
}

TEST(OptimizeCovariance, EqualChannelsMatchWaterFilling) {
    std::mt19937_64 rng(403);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t nt = 2 + static_cast<std::size_t>(trial % 3);
        const Channel h(random_matrix(rng, 1 + static_cast<std::size_t>(trial % 4), nt));
        const double p = 0.5 + static_cast<double>(trial % 5);
        const auto opt = optimize_covariance(ChannelPair(h, h), p);
        EXPECT_NEAR(opt.objective, water_filling_capacity(h.h(), p), 1e-6) << trial;
        EXPECT_LE(opt.cx.trace(), p * (1.0 + 1e-9));
    }
}

TEST(OptimizeCovariance, TwoBandPairBeatsDiagonalGrid) {
    const auto pair = fig4_pair();
    const auto opt = optimize_covariance(pair, 1.0);
    double grid = 0.0;
    for (int k = 0; k <= 10000; ++k) {
        const double g = k / 10000.0;
        grid = std::max(grid, compound_mi(pair, InputCovariance::diagonal({g, 1.0 - g}, 1.0)));
    }
    EXPECT_GE(opt.objective, grid - 1e-9);
    EXPECT_TRUE(opt.converged);
}

TEST(OptimizeCovariance, NeverWorseThanScaledIdentity) {
    std::mt19937_64 rng(405);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t nt = 1 + static_cast<std::size_t>(trial % 4);
        const ChannelPair pair(Channel(random_matrix(rng, 2, nt)), Channel(random_matrix(rng, 3, nt)));
        const double p = 3.0;
        const auto opt = optimize_covariance(pair, p);
        EXPECT_GE(opt.objective, compound_mi(pair, InputCovariance::scaled_identity(nt, p)) - 1e-12);
        EXPECT_TRUE(opt.converged) << trial << " gap " << opt.dual_gap;
    }
}

TEST(OptimizeCovariance, ZeroPowerAndInvalidPower) {
    const auto opt = optimize_covariance(fig4_pair(), 0.0);
    EXPECT_EQ(opt.objective, 0.0);
    EXPECT_EQ(opt.cx.trace(), 0.0);
    EXPECT_THROW(optimize_covariance(fig4_pair(), -1.0), InvalidValue);
}

TEST(MulticastScheme, EqualChannels) {
    std::mt19937_64 rng(407);
    const Channel h(random_matrix(rng, 3, 2));
    const auto cx = InputCovariance::scaled_identity(2, 2.0);
    const auto s = build_multicast_scheme(ChannelPair(h, h), cx);
    for (double r : s.ratio) {
        EXPECT_NEAR(r, 1.0, 1e-10);
    }
    for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_NEAR(s.users[0].sinrs[j], s.users[1].sinrs[j], 1e-9);
    }
    const auto rep = verify_multicast(s);
    EXPECT_TRUE(rep.passed);
}

TEST(MulticastScheme, EqualMutualInformation) {
    const ChannelPair pair(Channel(ComplexMatrix::diagonal(std::vector<double>{2.0, 1.0})),
                           Channel(ComplexMatrix::diagonal(std::vector<double>{1.0, 2.0})));
    const InputCovariance cx(ComplexMatrix::identity(2), 2.0);
    const auto s = build_multicast_scheme(pair, cx);
    for (double r : s.ratio) {
        EXPECT_NEAR(r, 1.0, 1e-10);
    }
    EXPECT_NEAR(s.total_rate, mutual_information(pair.h1(), cx), 1e-9);
    EXPECT_TRUE(verify_multicast(s).passed);
}

TEST(MulticastScheme, TwoBandDominance) {
    const auto pair = fig4_pair();
    const auto cx = InputCovariance::diagonal({0.5, 0.5}, 1.0);
    const auto s = build_multicast_scheme(pair, cx);
    EXPECT_EQ(s.weaker, 1u);
    EXPECT_NEAR(s.total_rate, std::log2(9.0), 1e-9);
    for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_GT(s.users[0].sinrs[j], s.users[1].sinrs[j]);
    }
    const auto rep = verify_multicast(s);
    EXPECT_TRUE(rep.passed);
    EXPECT_LE(rep.equality_violation, 1e-9);
}

TEST(MulticastScheme, PerturbedPrecoderFails) {
    const auto pair = fig4_pair();
    const auto cx = InputCovariance::diagonal({0.5, 0.5}, 1.0);
    auto s = build_multicast_scheme(pair, cx);
    const double a = 0.3;
    const ComplexMatrix rot{{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}};
    s.v = s.v * rot;
    const auto rep = verify_multicast(s);
    EXPECT_FALSE(rep.passed);
    ASSERT_TRUE(rep.failing_stream.has_value());
    EXPECT_LT(*rep.failing_stream, 2u);
    EXPECT_LE(rep.unitarity_v, 1e-12);

    s.v = Complex(1.5) * s.v;
    EXPECT_FALSE(verify_multicast(s).passed);
}

TEST(MulticastScheme, CustomRatio) {
    std::mt19937_64 rng(409);
    const ChannelPair pair(Channel(random_matrix(rng, 3, 2)), Channel(random_matrix(rng, 2, 2)));
    const auto cx = InputCovariance::scaled_identity(2, 2.0);
    const auto gs = gsv(augment(pair.h1(), cx), augment(pair.h2(), cx));
    const auto s = build_multicast_scheme(pair, cx, PositiveVector(gs.values));
    EXPECT_NEAR(s.total_rate, compound_mi(pair, cx), 1e-9);
}

TEST(MulticastScheme, RandomPairsAndSwapSymmetry) {
    std::mt19937_64 rng(411);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t nt = 1 + static_cast<std::size_t>(trial % 4);
        const ChannelPair pair(Channel(random_matrix(rng, 1 + static_cast<std::size_t>(trial % 3), nt)),
                               Channel(random_matrix(rng, 1 + static_cast<std::size_t>((trial / 3) % 4), nt)));
        const double p = 0.5 + static_cast<double>(trial % 7);
        const InputCovariance cx(random_psd(rng, nt, 1 + static_cast<std::size_t>(trial % nt), p), p);
        const auto s = build_multicast_scheme(pair, cx);
        const SicScheme& weak = s.users[s.weaker];
        const SicScheme& strong = s.users[1 - s.weaker];
        double sum = 0.0;
        for (std::size_t j = 0; j < nt; ++j) {
            sum += std::log2(1.0 + weak.sinrs[j]);
            ASSERT_GE(strong.sinrs[j], weak.sinrs[j] - 1e-8) << trial;
        }
        ASSERT_NEAR(sum, compound_mi(pair, cx), 1e-8) << trial;
        ASSERT_TRUE(verify_multicast(s).passed) << trial;
        ASSERT_NEAR(build_multicast_scheme(pair.swapped(), cx).total_rate, s.total_rate, 1e-9);
    }
}
