#include "hillspec/galerkin.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "hillspec/reduction.hpp"

namespace hillspec {

index_t trust_count_for(index_t K) {
    const double edge = static_cast<double>(K - 2) * kPi;
    index_t n = 0;
    while (true) {
        const double m = static_cast<double>(n + 1);
        if (4.0 * (m * m * kPi * kPi + 12.0 * m) < edge * edge)
            ++n;
        else
            break;
    }
    return n;
}

void lex_sort(std::vector<cplx>& v) {
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    // tie bands: runs whose real parts sit within the tolerance of the run head
    for (std::size_t i = 0; i < v.size();) {
        const double tol = 1e-10 * std::max(1.0, std::abs(v[i].real()));
        std::size_t j = i + 1;
        while (j < v.size() && v[j].real() - v[i].real() <= tol) ++j;
        if (j - i > 1)
            std::sort(v.begin() + static_cast<std::ptrdiff_t>(i), v.begin() + static_cast<std::ptrdiff_t>(j),
                      [](cplx a, cplx b) { return a.imag() < b.imag(); });
        i = j;
    }
}

std::vector<index_t> sector_indices(index_t K, BoundaryCondition bc) {
    std::vector<index_t> idx;
    if (bc == BoundaryCondition::dirichlet) {
        for (index_t m = 1; m <= K; ++m) idx.push_back(m);
        return idx;
    }
    const index_t parity = bc == BoundaryCondition::per_plus ? 0 : 1;
    for (index_t k = -K; k <= K; ++k)
        if (((k % 2) + 2) % 2 == parity) idx.push_back(k);
    return idx;
}

namespace {

void check_inputs(const Potential& q, index_t K) {
    if (K < 16) throw TruncationError("Galerkin half range K must be at least 16");
    if (!q.seq.empty() && std::max(std::abs(q.seq.min_index()), std::abs(q.seq.max_index())) > 2 * K)
        throw TruncationError("potential has coefficients beyond index 2K = " + std::to_string(2 * K));
}

std::vector<cplx> eigenvalues_of(const Eigen::MatrixXcd& M, bool hermitian) {
    std::vector<cplx> out;
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw EigensolverError("self-adjoint eigensolver failed");
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.emplace_back(es.eigenvalues()[i], 0.0);
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
        if (es.info() != Eigen::Success) throw EigensolverError("complex eigensolver failed");
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
    }
    return out;
}

}  // namespace

Eigen::MatrixXcd sector_matrix(const Potential& q, index_t K, BoundaryCondition bc) {
    const auto idx = sector_indices(K, bc);
    const auto d = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
    if (bc == BoundaryCondition::dirichlet) {
        const CosCoeffs c = dirichlet_cos_coeffs(q, K);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                const index_t m = idx[i], n = idx[j];
                M(i, j) = c(m - n) - c(m + n);
            }
    } else {
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) M(i, j) = q[idx[i] - idx[j]];
    }
    for (Eigen::Index i = 0; i < d; ++i) M(i, i) += mode_symbol(idx[i]);
    return M;
}

SpectrumResult periodic_spectrum(const Potential& q, index_t K) {
    check_inputs(q, K);
    SpectrumResult r;
    r.K = K;
    for (auto bc : {BoundaryCondition::per_plus, BoundaryCondition::per_minus}) {
        auto ev = eigenvalues_of(sector_matrix(q, K, bc), q.is_real());
        r.periodic.insert(r.periodic.end(), ev.begin(), ev.end());
    }
    lex_sort(r.periodic);
    r.trust_count = trust_count_for(K);
    return r;
}

SpectrumResult dirichlet_spectrum(const Potential& q, index_t K) {
    check_inputs(q, K);
    SpectrumResult r;
    r.K = K;
    r.dirichlet = eigenvalues_of(sector_matrix(q, K, BoundaryCondition::dirichlet), q.is_real());
    lex_sort(r.dirichlet);
    r.trust_count = trust_count_for(K);
    return r;
}

SpectrumResult full_spectrum(const Potential& q, index_t K) {
    SpectrumResult r = periodic_spectrum(q, K);
    r.dirichlet = dirichlet_spectrum(q, K).dirichlet;
    return r;
}

GapsMidpoints gaps_and_midpoints(const SpectrumResult& spec) {
    GapsMidpoints g;
    const index_t count = std::min<index_t>(spec.trust_count, static_cast<index_t>((spec.periodic.size() - 1) / 2));
    for (index_t n = 1; n <= count; ++n) {
        const cplx lm = spec.lambda_minus(n), lp = spec.lambda_plus(n);
        g.gamma.push_back(lp - lm);
        g.tau.push_back(0.5 * (lp + lm));
        if (spec.has_dirichlet() && static_cast<std::size_t>(n) <= spec.dirichlet.size())
            g.tau_minus_mu.push_back(g.tau.back() - spec.mu(n));
    }
    return g;
}

double max_pair_distance(const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t count) {
    double worst = 0.0;
    const std::size_t nb = std::min(b.size(), count + 4);
    for (std::size_t i = 0; i < std::min(count, a.size()); ++i) {
        double best = kInf;
        for (std::size_t j = 0; j < nb; ++j) best = std::min(best, std::abs(a[i] - b[j]));
        worst = std::max(worst, best);
    }
    return worst;
}

// ---------------------------------------------------------------- Riesz projector

namespace {

BoundaryCondition sector_of(index_t n) {
    return n % 2 == 0 ? BoundaryCondition::per_plus : BoundaryCondition::per_minus;
}

void check_separation(const std::vector<cplx>& ev, index_t n) {
    const double c = mode_symbol(n), r = static_cast<double>(n);
    int inside = 0;
    for (const auto& l : ev) {
        const double d = std::abs(l - c);
        if (d <= 0.5 * r)
            ++inside;
        else if (d < 1.5 * r)
            throw SeparationError("eigenvalue near the contour |lambda - n^2 pi^2| = n for n=" + std::to_string(n));
    }
    if (inside != 2)
        throw SeparationError("expected two eigenvalues within n/2 of n^2 pi^2, found " + std::to_string(inside));
}

Eigen::MatrixXcd embed(const Eigen::MatrixXcd& S, const std::vector<index_t>& idx, index_t K) {
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(2 * K + 1, 2 * K + 1);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            R(idx[i] + K, idx[j] + K) = S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return R;
}

}  // namespace

RieszProjector riesz_projector(const Potential& q, index_t n, index_t K, int quad_points) {
    check_inputs(q, K);
    if (n < 1 || n > K - 2) throw TruncationError("projector index outside the truncated basis");
    const auto bc = sector_of(n);
    const auto idx = sector_indices(K, bc);
    const Eigen::MatrixXcd M = sector_matrix(q, K, bc);

    Eigen::MatrixXcd V, Vinv;
    Eigen::VectorXcd lam;
    if (q.is_real()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
        if (es.info() != Eigen::Success) throw EigensolverError("self-adjoint eigensolver failed");
        V = es.eigenvectors();
        Vinv = V.adjoint();
        lam = es.eigenvalues().cast<cplx>();
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, true);
        if (es.info() != Eigen::Success) throw EigensolverError("complex eigensolver failed");
        V = es.eigenvectors();
        Vinv = V.partialPivLu().inverse();
        lam = es.eigenvalues();
    }
    std::vector<cplx> ev(lam.data(), lam.data() + lam.size());
    check_separation(ev, n);

    const double c = mode_symbol(n), rad = static_cast<double>(n);
    RieszProjector out;
    out.n = n;
    out.K = K;
    for (int N = std::max(quad_points, 4); N <= (1 << 14); N *= 2) {
        Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(lam.size());
        for (int j = 0; j < N; ++j) {
            const cplx dz = std::polar(rad, 2.0 * kPi * j / N);
            for (Eigen::Index i = 0; i < lam.size(); ++i) phi[i] += dz / (c + dz - lam[i]);
        }
        phi /= static_cast<double>(N);
        const Eigen::MatrixXcd S = V * phi.asDiagonal() * Vinv;
        out.idempotency = (S * S - S).cwiseAbs().maxCoeff();
        out.quad_points = N;
        out.trace = S.trace();
        if (out.idempotency < 1e-6 || N * 2 > (1 << 14)) {
            out.R = embed(S, idx, K);
            break;
        }
    }
    return out;
}

Eigen::MatrixXcd riesz_projector_direct(const Potential& q, index_t n, index_t K, int quad_points) {
    check_inputs(q, K);
    const auto d = 2 * K + 1;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
    for (index_t k = -K; k <= K; ++k) {
        for (index_t l = -K; l <= K; ++l) M(k + K, l + K) = q[k - l];
        M(k + K, k + K) += mode_symbol(k);
    }
    const double c = mode_symbol(n), rad = static_cast<double>(n);
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(d, d);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
    for (int j = 0; j < quad_points; ++j) {
        const cplx dz = std::polar(rad, 2.0 * kPi * j / quad_points);
        const Eigen::MatrixXcd A = (c + dz) * I - M;
        R += dz * A.partialPivLu().solve(I);
    }
    return R / static_cast<double>(quad_points);
}

double projector_distance(const RieszProjector& p, int grid_factor) {
    const index_t K = p.K;
    const auto idx = sector_indices(K, sector_of(p.n));
    const auto d = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd D(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) D(i, j) = p.R(idx[i] + K, idx[j] + K);
    for (Eigen::Index i = 0; i < d; ++i)
        if (idx[i] == p.n || idx[i] == -p.n) D(i, i) -= 1.0;

    // |(D^T e(x))|^2 = e^H G e with G = conj(D) D^T, which has rank <= 4
    const Eigen::MatrixXcd G = D.conjugate() * D.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    std::vector<std::pair<double, Eigen::VectorXcd>> modes;
    for (Eigen::Index i = 0; i < d; ++i)
        if (es.eigenvalues()[i] > 1e-13 * top) modes.emplace_back(es.eigenvalues()[i], es.eigenvectors().col(i));
    if (modes.empty()) return 0.0;

    const index_t npts = static_cast<index_t>(grid_factor) * (2 * K + 1);
    double best = 0.0;
    Eigen::VectorXcd e(d);
    for (index_t g = 0; g < npts; ++g) {
        const double x = 2.0 * static_cast<double>(g) / static_cast<double>(npts);
        for (Eigen::Index i = 0; i < d; ++i) e[i] = std::polar(1.0, kPi * static_cast<double>(idx[i]) * x);
        double acc = 0.0;
        for (const auto& [mu, u] : modes) acc += mu * std::norm(u.dot(e));
        best = std::max(best, acc);
    }
    return std::sqrt(best);
}

// ---------------------------------------------------------------- decay

DecayReport verify_decay(const Potential& q, const Weight& w, double s, const std::vector<index_t>& K_list,
                         index_t N) {
    DecayReport rep;
    rep.q_norm = sup_norm(q.seq, w, s);
    std::vector<cplx> last_gamma;
    for (index_t K : K_list) {
        const auto spec = full_spectrum(q, K);
        const auto gm = gaps_and_midpoints(spec);
        DecayRow row;
        row.K = K;
        row.trust = static_cast<index_t>(gm.gamma.size());
        for (std::size_t i = 0; i < gm.gamma.size(); ++i) {
            const auto n = static_cast<index_t>(i + 1);
            const double f = w(2 * n) * std::pow(bracket(2 * n), s);
            row.gap_sup = std::max(row.gap_sup, f * std::abs(gm.gamma[i]));
            if (i < gm.tau_minus_mu.size()) row.mid_sup = std::max(row.mid_sup, f * std::abs(gm.tau_minus_mu[i]));
        }
        rep.rows.push_back(row);
        last_gamma = gm.gamma;
    }
    if (rep.rows.size() >= 2) {
        const auto& a = rep.rows[rep.rows.size() - 2];
        const auto& b = rep.rows.back();
        rep.gap_rel_change = std::abs(a.gap_sup - b.gap_sup) / std::max(b.gap_sup, 1e-300);
        rep.mid_rel_change = std::abs(a.mid_sup - b.mid_sup) / std::max(b.mid_sup, 1e-300);
        if (b.gap_sup == 0.0 && a.gap_sup == 0.0) rep.gap_rel_change = 0.0;
        if (b.mid_sup == 0.0 && a.mid_sup == 0.0) rep.mid_rel_change = 0.0;
    }

    rep.c_s = estimate_c_s(s);
    if (N <= 0) N = contraction_threshold(rep.c_s, rep.q_norm, s);
    rep.N = N;
    const double beta = 0.5 - std::abs(s);
    double tail_q = 0.0;
    for (std::size_t i = 0; i < q.seq.nnz(); ++i) {
        const index_t k = q.seq.indices()[i];
        if (std::abs(k) >= 2 * N)
            tail_q = std::max(tail_q, w(k) * std::pow(bracket(k), s) * std::abs(q.seq.values()[i]));
    }
    for (std::size_t i = 0; i < last_gamma.size(); ++i) {
        const auto n = static_cast<index_t>(i + 1);
        if (n < N) continue;
        rep.tail_lhs = std::max(rep.tail_lhs, w(2 * n) * std::pow(bracket(2 * n), s) * std::abs(last_gamma[i]));
    }
    rep.tail_rhs = 4.0 * tail_q + 16.0 * rep.c_s * std::pow(static_cast<double>(N), -beta) * rep.q_norm * rep.q_norm;
    rep.tail_ok = rep.tail_lhs <= rep.tail_rhs;
    return rep;
}

}  // namespace hillspec
