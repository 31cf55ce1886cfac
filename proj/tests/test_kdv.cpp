#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <hillspec/kdv.hpp>

using namespace hillspec;

namespace {

double max_diff(const PDEState& a, const PDEState& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.u_hat.size(); ++i) m = std::max(m, std::abs(a.u_hat[i] - b.u_hat[i]));
    return m;
}

PDEState random_state(std::mt19937_64& rng, index_t K, index_t band, double amp) {
    std::normal_distribution<double> g;
    PDEState u(K);
    for (index_t k = 1; k <= band; ++k) {
        const cplx v = amp * cplx(g(rng), g(rng)) / static_cast<double>(k * k);
        u[k] = v;
        u[-k] = std::conj(v);
    }
    return u;
}

}  // namespace

TEST(Bridge, RoundTrip) {
    const Potential q = power_law_potential(0.2, -1.0, 10, 3);
    const PDEState u = pde_state_from_potential(q, 32);
    EXPECT_EQ(u[3], q[spectral_index(3)]);
    EXPECT_EQ(u[-7], q[spectral_index(-7)]);
    EXPECT_EQ(u[0], cplx(0.0));
    EXPECT_LT(sup_norm(potential_from_pde_state(u).seq - q.seq, Weight{}, 0.0), 1e-300);
    EXPECT_TRUE(potential_from_pde_state(u).is_real());
}

TEST(Airy, IdentityAndPeriod) {
    std::mt19937_64 rng(1);
    const PDEState u = random_state(rng, 16, 8, 0.1);
    EXPECT_EQ(max_diff(evolve_airy(u, 0.0), u), 0.0);
    const PDEState v = evolve_airy(u, 2 * kPi / std::pow(2 * kPi, 3));
    EXPECT_NEAR(std::abs(v[1] - u[1]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v[-1] - u[-1]), 0.0, 1e-15);
    const PDEState w = evolve_airy(u, 0.37);
    for (index_t k = -16; k <= 16; ++k) EXPECT_NEAR(std::abs(w[k]), std::abs(u[k]), 1e-15);
    for (index_t k = 1; k <= 16; ++k) EXPECT_EQ(w[-k], std::conj(w[k]));
}

TEST(Kdv, ZeroStaysZero) {
    PDEState u(16);
    EXPECT_EQ(evolve_kdv(u, 0.01).max_abs_coeff(), 0.0);
}

TEST(Kdv, LinearLimit) {
    std::mt19937_64 rng(2);
    PDEState u = random_state(rng, 32, 10, 1e-6);
    u.dt = 1e-5;
    EXPECT_LT(max_diff(evolve_kdv(u, 0.01), evolve_airy(u, 0.01)), 1e-9);
}

TEST(Kdv, FourthOrderSelfConvergence) {
    PDEState u = cosine_state(0.1, 32);
    std::vector<PDEState> sols;
    for (double dt : {5e-4, 2.5e-4, 1.25e-4}) {
        u.dt = dt;
        sols.push_back(evolve_kdv(u, 0.01));
    }
    const double e1 = max_diff(sols[0], sols[1]), e2 = max_diff(sols[1], sols[2]);
    ASSERT_GT(e2, 0.0);
    EXPECT_NEAR(e1 / e2, 16.0, 1.0) << e1 << " " << e2;
}

TEST(Kdv, ConservationReversibilityReality) {
    std::mt19937_64 rng(3);
    const PDEState u0 = random_state(rng, 32, 6, 0.05);
    const RefinedEvolution fwd = evolve_kdv_refined(u0, 0.01);
    const Conserved c0 = conserved(u0), c1 = conserved(fwd.u);
    EXPECT_LT(std::abs(c1.hamiltonian - c0.hamiltonian) / std::abs(c0.hamiltonian), 1e-6);
    EXPECT_LT(std::abs(c1.L2 - c0.L2) / c0.L2, 1e-6);
    EXPECT_EQ(fwd.u[0], u0[0]);
    for (index_t k = 1; k <= 32; ++k) EXPECT_EQ(fwd.u[-k], std::conj(fwd.u[k]));

    PDEState back_in = fwd.u;
    back_in.dt = fwd.dt;
    const PDEState back = evolve_kdv(back_in, -0.01);
    EXPECT_LT(max_diff(back, u0) / u0.max_abs_coeff(), 1e-8);
}

TEST(Kdv, MeanPreserved) {
    std::mt19937_64 rng(4);
    PDEState u = random_state(rng, 24, 5, 0.05);
    u[0] = 0.3;
    u.dt = 1e-5;
    EXPECT_EQ(evolve_kdv(u, 0.002)[0], cplx(0.3));
}

TEST(Kdv, BlowUpDetected) {
    PDEState u = cosine_state(1e4, 32);
    u.dt = 1e-2;
    EXPECT_THROW(evolve_kdv(u, 1.0), InstabilityError);
}

TEST(Conserved, Examples) {
    const Conserved z = conserved(PDEState(16));
    EXPECT_EQ(z.L2, 0.0);
    EXPECT_EQ(z.hamiltonian, 0.0);
    const double a = 0.3;
    const Conserved c = conserved(cosine_state(a, 16));
    EXPECT_NEAR(c.hamiltonian, kPi * kPi * a * a, 1e-13);
    EXPECT_NEAR(c.L2, 0.5 * a * a, 1e-15);
}

TEST(Conserved, CubicTermOracle) {
    // u = a cos(2 pi x) + b cos(4 pi x): int u^3 = 3 a^2 b / 4
    const double a = 0.3, b = 0.2;
    PDEState u(16);
    u[1] = u[-1] = a / 2;
    u[2] = u[-2] = b / 2;
    const double quad = 0.5 * (std::pow(2 * kPi * a, 2) + std::pow(4 * kPi * b, 2)) / 2;
    EXPECT_NEAR(conserved(u).hamiltonian, quad + 0.75 * a * a * b, 1e-13);
}

TEST(Isospectral, ZeroTime) {
    const DriftReport r = isospectral_check(single_mode(0.05), 0.0, 64, 32);
    EXPECT_EQ(r.max_periodic_drift, 0.0);
    EXPECT_EQ(r.max_gamma_drift, 0.0);
}

TEST(Isospectral, CosineData) {
    const DriftReport r = isospectral_check(single_mode(0.05), 0.01, 64, 32);
    EXPECT_EQ(r.n_max, 10);
    EXPECT_LT(r.max_periodic_drift, 1e-6);
    EXPECT_LT(r.max_gamma_drift, 1e-6);
    EXPECT_GT(r.max_mu_motion, 1e-4);  // Dirichlet eigenvalues move
}

TEST(Isospectral, TruncationGuards) {
    EXPECT_THROW(isospectral_check(real_potential({{30, 0.01}}), 0.01, 64, 32), TruncationError);
    EXPECT_THROW(isospectral_check(single_mode(0.05), 0.01, 32, 64), TruncationError);
}

TEST(AiryDemo, FloorAndComponents) {
    std::vector<double> ts;
    for (int i = 0; i <= 12; ++i) ts.push_back(std::pow(10.0, -9.0 + 0.5 * i));
    const AiryDemoReport r = airy_norm_demo(-0.25, 0.1, 4096, ts);
    EXPECT_GE(r.sup_floor, 0.1);
    ASSERT_EQ(r.component_slopes.size(), 3u);
    for (double s : r.component_slopes) EXPECT_NEAR(s, 1.0, 0.05);
    EXPECT_LT(r.rows.front().max_component_distance, 1e-5);
}

TEST(FitSlope, ExactLine) {
    EXPECT_NEAR(fit_slope({0, 1, 2, 3}, {1, 3, 5, 7}), 2.0, 1e-14);
}
