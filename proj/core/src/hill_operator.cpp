#include "hillspec/hill_operator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hillspec {

Potential::Potential(FourierSeq coeffs, double s_label, Weight weight)
    : seq(std::move(coeffs)), s(s_label), w(weight) {
    SeqFlags fl = seq.flags();
    fl.zero_mean = true;
    fl.one_periodic = true;
    seq.set_flags(fl);
    seq.validate(1e-12);
}

index_t Potential::band() const {
    if (seq.empty()) return 0;
    return std::max(std::abs(seq.min_index()), std::abs(seq.max_index())) / 2;
}

Potential zero_potential(index_t half_range) {
    return Potential(FourierSeq(half_range, SeqFlags{true, true, true}));
}

Potential single_mode(cplx c) {
    SeqFlags fl{c.imag() == 0.0, true, true};
    return Potential(FourierSeq::from_pairs(2, {{-2, c}, {2, c}}, fl));
}

Potential real_potential(const std::map<index_t, cplx>& q2j_positive, double s, Weight w) {
    std::vector<std::pair<index_t, cplx>> e;
    index_t jmax = 1;
    for (const auto& [j, v] : q2j_positive) {
        if (j < 1) throw InvalidSequence("real_potential expects indices j >= 1");
        e.emplace_back(2 * j, v);
        e.emplace_back(-2 * j, std::conj(v));
        jmax = std::max(jmax, j);
    }
    return Potential(FourierSeq::from_pairs(2 * jmax, std::move(e), SeqFlags{true, true, true}), s, w);
}

Potential complex_potential(const std::map<index_t, cplx>& q2j, double s, Weight w) {
    std::vector<std::pair<index_t, cplx>> e;
    index_t jmax = 1;
    for (const auto& [j, v] : q2j) {
        if (j == 0) throw InvalidSequence("potential must have zero mean");
        e.emplace_back(2 * j, v);
        jmax = std::max(jmax, std::abs(j));
    }
    return Potential(FourierSeq::from_pairs(2 * jmax, std::move(e), SeqFlags{false, true, true}), s, w);
}

Potential power_law_potential(double amp, double expo, index_t jmax, std::uint64_t seed, bool cos_type, double s,
                              Weight w) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    std::map<index_t, cplx> c;
    for (index_t j = 1; j <= jmax; ++j) {
        const double mag = amp * std::pow(bracket(j), expo);
        c[j] = cos_type ? cplx(mag, 0.0) : std::polar(mag, phase(rng));
    }
    return real_potential(c, s, w);
}

FourierSeq multiply(const Potential& q, const FourierSeq& f) { return convolve(q.seq, f); }

FourierSeq multiply(const Potential& q, const FourierSeq& f, index_t out_half_range) {
    return convolve(q.seq, f, out_half_range);
}

void check_strip(index_t n, cplx delta) {
    if (std::abs(delta.real()) > 12.0 * static_cast<double>(n))
        throw StripViolation("lambda outside strip S_n for n=" + std::to_string(n) +
                             " (|Re lambda - n^2 pi^2| = " + std::to_string(std::abs(delta.real())) + ")");
}

FourierSeq apply_A_inv_Q_offset(index_t n, cplx delta, const FourierSeq& f) {
    check_strip(n, delta);
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    FourierSeq g(f.half_range(), SeqFlags{false, false, f.is_one_periodic()});
    std::vector<std::pair<index_t, cplx>> e;
    e.reserve(f.nnz());
    const auto& idx = f.indices();
    const auto& val = f.values();
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const index_t k = idx[i];
        if (k == n || k == -n) continue;
        const double kk = static_cast<double>(k) * static_cast<double>(k);
        const cplx div = delta + (n2 - kk) * (kPi * kPi);
        if (std::abs(div) < 1e-12)
            throw NearSingular("divisor below 1e-12 at k=" + std::to_string(k));
        e.emplace_back(k, val[i] / div);
    }
    return FourierSeq::from_pairs(f.half_range(), std::move(e), g.flags());
}

FourierSeq apply_A_inv_Q(cplx lambda, index_t n, const FourierSeq& f) {
    check_strip(n, lambda - mode_symbol(n));
    FourierSeq g(f.half_range(), SeqFlags{false, false, f.is_one_periodic()});
    std::vector<std::pair<index_t, cplx>> e;
    e.reserve(f.nnz());
    for (std::size_t i = 0; i < f.nnz(); ++i) {
        const index_t k = f.indices()[i];
        if (k == n || k == -n) continue;
        const cplx div = lambda - mode_symbol(k);
        if (std::abs(div) < 1e-12)
            throw NearSingular("divisor below 1e-12 at k=" + std::to_string(k));
        e.emplace_back(k, f.values()[i] / div);
    }
    return FourierSeq::from_pairs(f.half_range(), std::move(e), g.flags());
}

FourierSeq project(index_t n, const FourierSeq& f, Projection which) {
    std::vector<std::pair<index_t, cplx>> e;
    for (std::size_t i = 0; i < f.nnz(); ++i) {
        const index_t k = f.indices()[i];
        const bool on = (k == n || k == -n);
        if (on == (which == Projection::P)) e.emplace_back(k, f.values()[i]);
    }
    SeqFlags fl = f.flags();
    if (which == Projection::P) fl.zero_mean = true;
    return FourierSeq::from_pairs(f.half_range(), std::move(e), fl);
}

namespace {

// int_0^1 e^{2 pi i j x} cos(k pi x) dx for odd k
cplx odd_cos_pairing(index_t j, index_t k) {
    const double jj = static_cast<double>(j), kk = static_cast<double>(k);
    return cplx(0.0, 4.0 * jj / kPi) / (4.0 * jj * jj - kk * kk);
}

}  // namespace

CosCoeffs dirichlet_cos_coeffs(const Potential& q, index_t K) {
    CosCoeffs c;
    c.K2 = 2 * K;
    c.v.assign(static_cast<std::size_t>(4 * K + 1), cplx(0.0));
    // <q, cos(pi x)>, subtracted at every odd k
    cplx c1 = 0.0;
    for (std::size_t i = 0; i < q.seq.nnz(); ++i)
        c1 += q.seq.values()[i] * odd_cos_pairing(q.seq.indices()[i] / 2, 1);
    for (index_t k = -2 * K; k <= 2 * K; ++k) {
        cplx val = 0.0;
        if (k % 2 == 0) {
            val = 0.5 * (q[k] + q[-k]);
        } else {
            for (std::size_t i = 0; i < q.seq.nnz(); ++i)
                val += q.seq.values()[i] * odd_cos_pairing(q.seq.indices()[i] / 2, k);
            val -= c1;
        }
        c.v[static_cast<std::size_t>(k + 2 * K)] = val;
    }
    return c;
}

}  // namespace hillspec
