#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <hillspec/birkhoff.hpp>
#include <hillspec/galerkin.hpp>

using namespace hillspec;

namespace {

BirkhoffState random_real_state(std::mt19937_64& rng, index_t count) {
    std::normal_distribution<double> g;
    BirkhoffState z(count);
    for (index_t n = 1; n <= count; ++n) {
        const cplx v(g(rng) / n, g(rng) / n);
        z.set(n, v);
        z.set(-n, std::conj(v));
    }
    return z;
}

double distance(const BirkhoffState& a, const BirkhoffState& b, double s) {
    BirkhoffState d(std::max(a.count(), b.count()));
    for (index_t n = 1; n <= d.count(); ++n) {
        d.set(n, a.z(n) - b.z(n));
        d.set(-n, a.z(-n) - b.z(-n));
    }
    return d.norm(s);
}

}  // namespace

TEST(State, Basics) {
    BirkhoffState z(3);
    z.set(2, cplx(1.0, 2.0));
    z.set(-2, cplx(1.0, -2.0));
    EXPECT_EQ(z.z(0), cplx(0.0));
    EXPECT_EQ(z.action(2), cplx(5.0));
    EXPECT_TRUE(z.is_real());
    z.set(5, 1.0);
    EXPECT_EQ(z.count(), 5);
    EXPECT_FALSE(z.is_real());
    EXPECT_THROW(z.set(0, 1.0), InvalidSequence);
}

TEST(Actions, Examples) {
    const ActionReport zero = actions_from_gaps({0.0, 0.0});
    EXPECT_EQ(zero.I, (std::vector<double>{0.0, 0.0}));
    EXPECT_TRUE(zero.asymptotic);
    std::vector<cplx> g;
    for (int n = 1; n <= 5; ++n) g.emplace_back(std::sqrt(8.0 * n * kPi));
    for (double I : actions_from_gaps(g).I) EXPECT_NEAR(I, 1.0, 1e-14);
    EXPECT_THROW(actions_from_gaps({cplx(0.1, 0.01)}), UnsupportedInput);
}

TEST(Actions, SingleModeGap) {
    const double c = 0.01;
    const GapsMidpoints gm = gaps_and_midpoints(periodic_spectrum(single_mode(c), 64));
    const ActionReport r = actions_from_gaps(gm.gamma);
    EXPECT_NEAR(r.I[0], c * c / (2 * kPi), 1e-4 * c * c);
}

TEST(Frequencies, Examples) {
    const FrequencyReport f = frequencies({0.0, 0.0, 0.0});
    for (int n = 1; n <= 3; ++n) EXPECT_NEAR(f.omega[n - 1], 8.0 * n * n * n * std::pow(kPi, 3), 1e-10);
    EXPECT_NEAR(frequencies({1.0}).omega[0], 8.0 * std::pow(kPi, 3) - 6.0, 1e-12);
    EXPECT_TRUE(f.asymptotic);
    EXPECT_THROW(frequencies({-1.0}), PreconditionError);
}

TEST(Frequencies, IncreasingForBoundedActions) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 30.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> I(40);
        for (double& v : I) v = u(rng);
        const FrequencyReport f = frequencies(I);
        for (std::size_t i = 2; i < f.omega.size(); ++i) EXPECT_GT(f.omega[i], f.omega[i - 1]);
    }
}

TEST(Linearized, Examples) {
    EXPECT_EQ(linearized_birkhoff(zero_potential()).norm(0.0), 0.0);
    const cplx c(0.3, 0.0);
    const BirkhoffState z = linearized_birkhoff(single_mode(c));
    EXPECT_NEAR(std::abs(z.z(1) - c / std::sqrt(2 * kPi)), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(z.z(-1) - c / std::sqrt(2 * kPi)), 0.0, 1e-16);
}

TEST(Linearized, RoundTripAndReality) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Potential q = power_law_potential(0.5, -0.7, 25, seed);
        const BirkhoffState z = linearized_birkhoff(q);
        EXPECT_TRUE(z.is_real(1e-15));
        const Potential back = inverse_linearized_birkhoff(z, q.seq.half_range());
        EXPECT_LT(sup_norm(back.seq - q.seq, Weight{}, 0.0), 1e-15);
        EXPECT_TRUE(back.is_real());
    }
    const Potential qc = complex_potential({{1, cplx(0.1, 0.2)}, {-3, 0.4}});
    const Potential back = inverse_linearized_birkhoff(linearized_birkhoff(qc));
    EXPECT_LT(sup_norm(back.seq - qc.seq, Weight{}, 0.0), 1e-15);
}

TEST(Flow, IdentityAtZero) {
    std::mt19937_64 rng(5);
    const BirkhoffState z = random_real_state(rng, 20);
    EXPECT_EQ(distance(flow(z, 0.0), z, 0.0), 0.0);
}

TEST(Flow, PreservesModuliAndActions) {
    std::mt19937_64 rng(6);
    const BirkhoffState z = random_real_state(rng, 30);
    const BirkhoffState w = flow(z, 17.3);
    for (index_t n = 1; n <= 30; ++n) {
        EXPECT_NEAR(std::abs(w.z(n)), std::abs(z.z(n)), 1e-15 * std::abs(z.z(n)));
        EXPECT_NEAR(std::abs(w.action(n) - z.action(n)), 0.0, 1e-15 * std::abs(z.action(n)));
    }
    EXPECT_TRUE(w.is_real(1e-15));
    EXPECT_TRUE(torus_membership(z, w, 1e-14));
}

TEST(Flow, PositiveIndexRotatesForward) {
    BirkhoffState z(1);
    z.set(1, 1.0);
    z.set(-1, 1.0);
    const double t = 1e-3;
    const double omega = std::pow(2 * kPi, 3) - 6.0;
    const BirkhoffState w = flow(z, t);
    EXPECT_NEAR(std::abs(w.z(1) - std::polar(1.0, omega * t)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(w.z(-1) - std::polar(1.0, -omega * t)), 0.0, 1e-15);
}

TEST(Flow, GroupLaw) {
    std::mt19937_64 rng(7);
    const BirkhoffState z = random_real_state(rng, 64);
    // dyadic times so that t1 + t2 is exact
    for (auto [t1, t2] : {std::pair{0.125, 0.375}, std::pair{3.5, -1.25}, std::pair{0.0078125, 10.5}}) {
        const double d = distance(flow(flow(z, t1), t2), flow(z, t1 + t2), 0.0);
        EXPECT_LT(d, 1e-12) << t1 << " " << t2;
    }
}

TEST(UnitPhase, ReducesLargeArguments) {
    const double omega = std::pow(2 * kPi * 64, 3);
    const cplx p = unit_phase(omega, 10.0);
    EXPECT_NEAR(std::abs(p), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(unit_phase(2 * kPi, 3.0) - cplx(1.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(unit_phase(1.0, 0.5) - std::polar(1.0, 0.5)), 0.0, 1e-16);
}

TEST(Torus, Membership) {
    std::mt19937_64 rng(8);
    const BirkhoffState z = random_real_state(rng, 16);
    EXPECT_TRUE(torus_membership(z, z, 1e-14));
    std::uniform_real_distribution<double> ph(0.0, 2 * kPi);
    BirkhoffState w = z;
    for (index_t n = 1; n <= 16; ++n) {
        const cplx u = std::polar(1.0, ph(rng));
        w.set(n, u * z.z(n));
        w.set(-n, std::conj(u) * z.z(-n));
    }
    EXPECT_TRUE(torus_membership(z, w, 1e-14));
    w.set(7, 2.0 * w.z(7));
    EXPECT_FALSE(torus_membership(z, w, 1e-14));
}

TEST(SignFlip, PairwiseSeparated) {
    const double s = -0.25, eps = 0.3;
    BirkhoffState z(200);
    for (index_t n = 1; n <= 200; ++n) {
        const double a = eps * std::pow(bracket(n), -s);
        z.set(n, a);
        z.set(-n, a);
    }
    const std::vector<index_t> nus{3, 10, 40, 120, 200};
    const auto fam = sign_flip_family(z, nus);
    ASSERT_EQ(fam.size(), nus.size());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        EXPECT_TRUE(torus_membership(z, fam[i], 1e-15));
        for (std::size_t j = i + 1; j < fam.size(); ++j) EXPECT_GE(distance(fam[i], fam[j], s), 2.0 * eps * (1 - 1e-14));
    }
}
