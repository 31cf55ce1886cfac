#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <functional>
#include <random>

#include <hillspec/galerkin.hpp>
#include <hillspec/hill_operator.hpp>

using namespace hillspec;

namespace {

FourierSeq random_seq(std::mt19937_64& rng, index_t K, int terms) {
    std::uniform_int_distribution<index_t> idx(-K, K);
    std::normal_distribution<double> g;
    std::vector<std::pair<index_t, cplx>> e;
    for (int i = 0; i < terms; ++i) e.emplace_back(idx(rng), cplx(g(rng), g(rng)));
    return FourierSeq::from_pairs(K, e);
}

// q(x) = sum_k q_k e^{i pi k x}
double eval_real(const Potential& q, double x) {
    cplx v = 0.0;
    for (std::size_t i = 0; i < q.seq.nnz(); ++i)
        v += q.seq.values()[i] * std::polar(1.0, kPi * static_cast<double>(q.seq.indices()[i]) * x);
    return v.real();
}

// y(1) for -y'' + q y = mu y, y(0) = 0, y'(0) = 1, classical RK4
double shoot(const Potential& q, double mu, int steps = 4000) {
    const double h = 1.0 / steps;
    double y = 0.0, p = 1.0;
    auto f = [&](double x, double yy) { return (eval_real(q, x) - mu) * yy; };
    for (int i = 0; i < steps; ++i) {
        const double x = i * h;
        const double k1y = p, k1p = f(x, y);
        const double k2y = p + 0.5 * h * k1p, k2p = f(x + 0.5 * h, y + 0.5 * h * k1y);
        const double k3y = p + 0.5 * h * k2p, k3p = f(x + 0.5 * h, y + 0.5 * h * k2y);
        const double k4y = p + h * k3p, k4p = f(x + h, y + h * k3y);
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    }
    return y;
}

double shooting_eigenvalue(const Potential& q, double guess) {
    double a = guess - 0.5, b = guess + 0.5;
    double fa = shoot(q, a), fb = shoot(q, b);
    for (int i = 0; i < 60 && std::abs(b - a) > 1e-13; ++i) {
        const double c = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = c;
        fb = shoot(q, b);
    }
    return b;
}

}  // namespace

TEST(PotentialTest, Invariants) {
    EXPECT_THROW(Potential(FourierSeq::from_pairs(4, {{1, 1.0}})), InvalidSequence);
    EXPECT_THROW(Potential(FourierSeq::from_pairs(4, {{0, 1.0}})), InvalidSequence);
    const Potential q = real_potential({{1, cplx(0.1, 0.2)}, {3, 0.05}});
    EXPECT_EQ(q[-2], cplx(0.1, -0.2));
    EXPECT_EQ(q.band(), 3);
    EXPECT_TRUE(q.is_real());
}

TEST(Multiply, ZeroPotential) {
    std::mt19937_64 rng(1);
    EXPECT_TRUE(multiply(zero_potential(), random_seq(rng, 10, 5)).empty());
}

TEST(Multiply, SingleModeShiftsByTwo) {
    const cplx c(0.3, -0.1);
    const Potential q = complex_potential({{1, c}, {-1, c}});
    const FourierSeq g = multiply(q, FourierSeq::unit(10, 3));
    EXPECT_EQ(g.nnz(), 2u);
    EXPECT_EQ(g[1], c);
    EXPECT_EQ(g[5], c);
}

TEST(Multiply, DelegatesToConvolve) {
    std::mt19937_64 rng(8);
    const Potential q = power_law_potential(0.2, -1.0, 6, 4);
    const FourierSeq f = random_seq(rng, 12, 8);
    EXPECT_TRUE(multiply(q, f).same_entries(convolve(q.seq, f)));
}

TEST(Multiply, PreservesParity) {
    const Potential q = power_law_potential(0.2, -1.0, 5, 2);
    const FourierSeq odd = FourierSeq::from_pairs(20, {{-3, 1.0}, {1, 2.0}, {7, 0.5}});
    const FourierSeq go = multiply(q, odd);
    for (index_t k : go.indices()) EXPECT_NE(k % 2, 0);
    const FourierSeq even = FourierSeq::from_pairs(20, {{-4, 1.0}, {0, 2.0}, {6, 0.5}});
    const FourierSeq ge = multiply(q, even);
    for (index_t k : ge.indices()) EXPECT_EQ(k % 2, 0);
}

TEST(ApplyAInvQ, ProjectsOutPlusMinusN) {
    EXPECT_TRUE(apply_A_inv_Q(mode_symbol(4), 4, FourierSeq::unit(10, 4)).empty());
    EXPECT_TRUE(apply_A_inv_Q(mode_symbol(4), 4, FourierSeq::unit(10, -4)).empty());
}

TEST(ApplyAInvQ, MassAtZero) {
    for (index_t n : {1, 3, 10}) {
        const FourierSeq g = apply_A_inv_Q(mode_symbol(n), n, FourierSeq::unit(16, 0));
        EXPECT_NEAR(g[0].real(), 1.0 / mode_symbol(n), 1e-16);
    }
}

TEST(ApplyAInvQ, PerModeDivisionOracle) {
    std::mt19937_64 rng(12);
    for (index_t n : {2, 5, 9}) {
        const cplx lambda = mode_symbol(n) + cplx(0.0, 3.0 * n);
        const FourierSeq f = random_seq(rng, 30, 20);
        const FourierSeq g = apply_A_inv_Q(lambda, n, f);
        for (index_t k = -30; k <= 30; ++k) {
            const cplx want = (k == n || k == -n) ? cplx(0.0) : f[k] / (lambda - std::pow(k * kPi, 2));
            EXPECT_NEAR(std::abs(g[k] - want), 0.0, 1e-14 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST(ApplyAInvQ, LeftInverseOnComplement) {
    std::mt19937_64 rng(13);
    const index_t n = 6;
    const cplx lambda = mode_symbol(n) + cplx(20.0, -4.0);
    const FourierSeq f = project(n, random_seq(rng, 25, 15), Projection::Q);
    std::vector<std::pair<index_t, cplx>> af;
    for (std::size_t i = 0; i < f.nnz(); ++i) {
        const index_t k = f.indices()[i];
        af.emplace_back(k, (lambda - mode_symbol(k)) * f.values()[i]);
    }
    const FourierSeq back = apply_A_inv_Q(lambda, n, FourierSeq::from_pairs(25, af));
    for (index_t k = -25; k <= 25; ++k) EXPECT_NEAR(std::abs(back[k] - f[k]), 0.0, 1e-13 * std::max(1.0, std::abs(f[k])));
}

TEST(ApplyAInvQ, StripAndSingularity) {
    EXPECT_THROW(apply_A_inv_Q(mode_symbol(3) + 37.0, 3, FourierSeq::unit(8, 0)), StripViolation);
    EXPECT_NO_THROW(apply_A_inv_Q(mode_symbol(3) + 36.0, 3, FourierSeq::unit(8, 0)));
    // S_1 reaches lambda = 0, where the k = 0 divisor vanishes
    EXPECT_THROW(apply_A_inv_Q(0.0, 1, FourierSeq::unit(8, 0)), NearSingular);
}

TEST(Project, Complementary) {
    std::mt19937_64 rng(3);
    const FourierSeq f = random_seq(rng, 12, 10) + FourierSeq::from_pairs(12, {{4, 1.0}, {-4, 2.0}});
    const FourierSeq P = project(4, f, Projection::P), Q = project(4, f, Projection::Q);
    EXPECT_TRUE(project(4, P, Projection::Q).empty());
    EXPECT_TRUE((P + Q).same_entries(f));
    EXPECT_EQ(P.indices(), (std::vector<index_t>{-4, 4}));
    const FourierSeq e = FourierSeq::unit(12, 4);
    EXPECT_TRUE(project(4, e, Projection::P).same_entries(e));
    EXPECT_TRUE(project(4, e, Projection::Q).empty());
}

TEST(DirichletCos, ZeroPotential) {
    const CosCoeffs c = dirichlet_cos_coeffs(zero_potential(), 8);
    for (const cplx& v : c.v) EXPECT_EQ(v, cplx(0.0));
}

TEST(DirichletCos, CosineMode) {
    // q = 2c cos(2 pi x): int_0^1 q cos(2 pi x) dx = c, odd pairings vanish
    const double c0 = 0.07;
    const CosCoeffs c = dirichlet_cos_coeffs(single_mode(c0), 8);
    EXPECT_NEAR(c(2).real(), c0, 1e-15);
    EXPECT_NEAR(c(-2).real(), c0, 1e-15);
    for (index_t k = -15; k <= 15; k += 2) EXPECT_NEAR(std::abs(c(k)), 0.0, 1e-15);
}

TEST(DirichletCos, QuadratureOracle) {
    // <q, cos(k pi x) - cos(pi x)> over [0,1] for odd k; q has a sine part
    const Potential q = real_potential({{1, cplx(0.05, -0.08)}, {2, cplx(-0.02, 0.03)}});
    const CosCoeffs c = dirichlet_cos_coeffs(q, 8);
    const int N = 20000;
    for (index_t k : {0, 1, 2, 3, 4, 5, 7}) {
        double acc = 0.0;
        for (int i = 0; i < N; ++i) {
            const double x = (i + 0.5) / N;
            double basis = std::cos(k * kPi * x);
            if (k % 2 != 0) basis -= std::cos(kPi * x);
            acc += eval_real(q, x) * basis / N;
        }
        EXPECT_NEAR(c(k).real(), acc, 1e-8) << "k=" << k;
    }
}

TEST(DirichletCos, SobolevTrend) {
    // sum <m>^{2t} |q^cos_m|^2 <= C ||q||_{t,2}^2 with one fitted C
    const double t = -0.5;
    std::vector<double> ratio;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const Potential q = power_law_potential(0.3, -0.2, 20, seed);
        const CosCoeffs c = dirichlet_cos_coeffs(q, 64);
        double lhs = 0.0;
        for (index_t m = -128; m <= 128; ++m) lhs += std::pow(bracket(m), 2 * t) * std::norm(c(m));
        const double rhs = std::pow(norm(q.seq, Weight{}, t, 2.0), 2);
        ratio.push_back(lhs / rhs);
    }
    const double lo = *std::min_element(ratio.begin(), ratio.end());
    const double hi = *std::max_element(ratio.begin(), ratio.end());
    EXPECT_LT(hi, 4.0);
    EXPECT_LT(hi / lo, 4.0);
}

TEST(DirichletMatrix, SymmetricForRealPotential) {
    const Potential q = power_law_potential(0.3, -1.0, 10, 6);
    const auto D = sector_matrix(q, 24, BoundaryCondition::dirichlet);
    EXPECT_LT((D - D.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT(D.imag().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DirichletMatrix, ShootingOracle) {
    // mu_n from the Galerkin matrix against shooting on [0,1]
    const Potential cosq = single_mode(0.05);
    const Potential mixed = real_potential({{1, cplx(0.4, -0.3)}, {2, cplx(0.1, 0.2)}});
    for (const Potential* q : {&cosq, &mixed}) {
        const SpectrumResult sp = dirichlet_spectrum(*q, 64);
        for (index_t n = 1; n <= 3; ++n) {
            const double mu = shooting_eigenvalue(*q, sp.mu(n).real());
            EXPECT_NEAR(sp.mu(n).real(), mu, 1e-6) << "n=" << n;
        }
    }
}
