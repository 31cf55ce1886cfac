#include "hillspec/birkhoff.hpp"

#include <algorithm>
#include <cmath>

namespace hillspec {

BirkhoffState::BirkhoffState(index_t count)
    : pos_(static_cast<std::size_t>(count)), neg_(static_cast<std::size_t>(count)) {}

cplx BirkhoffState::z(index_t n) const {
    if (n == 0) return 0.0;
    const auto i = static_cast<std::size_t>((n > 0 ? n : -n) - 1);
    const auto& v = n > 0 ? pos_ : neg_;
    return i < v.size() ? v[i] : cplx(0.0);
}

void BirkhoffState::set(index_t n, cplx v) {
    if (n == 0) throw InvalidSequence("Birkhoff coordinates have no index 0");
    const index_t a = n > 0 ? n : -n;
    if (a > count()) {
        pos_.resize(static_cast<std::size_t>(a));
        neg_.resize(static_cast<std::size_t>(a));
    }
    (n > 0 ? pos_ : neg_)[static_cast<std::size_t>(a - 1)] = v;
}

std::vector<cplx> BirkhoffState::actions() const {
    std::vector<cplx> out;
    for (index_t n = 1; n <= count(); ++n) out.push_back(action(n));
    return out;
}

bool BirkhoffState::is_real(double tol) const {
    for (std::size_t i = 0; i < pos_.size(); ++i)
        if (std::abs(neg_[i] - std::conj(pos_[i])) > tol) return false;
    return true;
}

double BirkhoffState::norm(double s) const {
    double m = 0.0;
    for (index_t n = 1; n <= count(); ++n)
        m = std::max(m, std::pow(bracket(n), s) * std::max(std::abs(z(n)), std::abs(z(-n))));
    return m;
}

ActionReport actions_from_gaps(const std::vector<cplx>& gamma, double tol) {
    ActionReport r;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        const cplx g = gamma[i];
        if (std::abs(g.imag()) > tol * std::max(1.0, std::abs(g)))
            throw UnsupportedInput("actions need real gap lengths; gamma_" + std::to_string(i + 1) + " is complex");
        const double n = static_cast<double>(i + 1);
        r.I.push_back(g.real() * g.real() / (8.0 * n * kPi));
    }
    return r;
}

FrequencyReport frequencies(const std::vector<double>& I) {
    FrequencyReport r;
    for (std::size_t i = 0; i < I.size(); ++i) {
        if (!(I[i] >= 0.0)) throw PreconditionError("actions must be nonnegative");
        const double k = 2.0 * static_cast<double>(i + 1) * kPi;
        r.omega.push_back(k * k * k - 6.0 * I[i]);
    }
    return r;
}

BirkhoffState linearized_birkhoff(const Potential& q) {
    const index_t band = q.band();
    BirkhoffState z(band);
    for (index_t n = 1; n <= band; ++n) {
        const double sc = std::sqrt(2.0 * kPi * static_cast<double>(n));
        z.set(n, q[2 * n] / sc);
        z.set(-n, q[-2 * n] / sc);
    }
    return z;
}

Potential inverse_linearized_birkhoff(const BirkhoffState& z, index_t half_range) {
    std::vector<std::pair<index_t, cplx>> e;
    for (index_t n = 1; n <= z.count(); ++n) {
        const double sc = std::sqrt(2.0 * kPi * static_cast<double>(n));
        e.emplace_back(-2 * n, z.z(-n) * sc);
        e.emplace_back(2 * n, z.z(n) * sc);
    }
    SeqFlags fl{z.is_real(), true, true};
    const index_t K = std::max(half_range, 2 * z.count());
    return Potential(FourierSeq::from_pairs(K, std::move(e), fl));
}

cplx unit_phase(double omega, double t) {
    // 2 pi as hi + lo
    constexpr double two_pi_hi = 6.283185307179586232;
    constexpr double two_pi_lo = 2.4492935982947064e-16;
    const double p = omega * t;
    const double e = std::fma(omega, t, -p);
    const double k = std::nearbyint(p / two_pi_hi);
    const double r = std::fma(-k, two_pi_hi, p) - k * two_pi_lo + e;
    return {std::cos(r), std::sin(r)};
}

BirkhoffState flow(const BirkhoffState& z, double t) {
    BirkhoffState out(z.count());
    for (index_t n = 1; n <= z.count(); ++n) {
        const double k = 2.0 * static_cast<double>(n) * kPi;
        // real states: I_n = |z_n|^2; otherwise the real part carries the frequency
        const double I = z.action(n).real();
        const double omega = k * k * k - 6.0 * I;
        const cplx ph = unit_phase(omega, t);
        out.set(n, ph * z.z(n));
        out.set(-n, std::conj(ph) * z.z(-n));
    }
    return out;
}

bool torus_membership(const BirkhoffState& ref, const BirkhoffState& test, double tol) {
    const index_t c = std::max(ref.count(), test.count());
    for (index_t n = 1; n <= c; ++n)
        for (index_t k : {n, -n}) {
            const double a = std::abs(ref.z(k));
            if (std::abs(std::abs(test.z(k)) - a) > tol * std::max(1.0, a)) return false;
        }
    return true;
}

std::vector<BirkhoffState> sign_flip_family(const BirkhoffState& z, const std::vector<index_t>& nus) {
    std::vector<BirkhoffState> out;
    for (index_t nu : nus) {
        BirkhoffState zm = z;
        zm.set(nu, -z.z(nu));
        zm.set(-nu, -z.z(-nu));
        out.push_back(std::move(zm));
    }
    return out;
}

}  // namespace hillspec
