#include "hillspec/reduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

namespace hillspec {

// ---------------------------------------------------------------- constants

double c_s_profile(index_t n, double s) {
    const double a = 1.0 - 2.0 * std::abs(s);
    const double beta = 0.5 - std::abs(s);
    const double nn = static_cast<double>(n);
    const index_t Kc = 2 * n + 64;
    double direct = 0.0;
    for (index_t k = Kc; k >= -Kc; --k) {
        if (k == n || k == -n) continue;
        const double p = std::abs(static_cast<double>(n + k));
        const double m = std::abs(static_cast<double>(n - k));
        direct += std::pow(p, -a) / m;
    }
    // |k| > Kc: sum_j j^{-1-a} g(n/j), g(u) = sum_i 2 p_i u^i over even i.
    // Each power is summed by the midpoint rule from X with two correction terms.
    const double X = static_cast<double>(Kc) + 0.5;
    const double u = nn / X;
    double binom = 1.0, partial = 0.0, upow = 1.0, tail = 0.0;
    for (int i = 0; i < 400; ++i) {
        partial += binom;  // p_i = sum_{l <= i} C(-a, l)
        if (i % 2 == 0) {
            const double e = 1.0 + a + i;  // f(x) = x^{-e}
            const double mid = 1.0 / (e - 1.0) - e / (24.0 * X * X) +
                               7.0 * e * (e + 1.0) * (e + 2.0) / (5760.0 * X * X * X * X);
            const double term = 2.0 * partial * upow * std::pow(X, -a) * mid;
            tail += term;
            if (i > 4 && std::abs(term) < 1e-18 * tail) break;
        }
        binom *= (-a - i) / (i + 1.0);
        upow *= u;
    }
    return std::pow(nn, beta) * 2.0 * (direct + tail);
}

double c_s_profile_bound(double n, double s) {
    const double a = 1.0 - 2.0 * std::abs(s);
    const double L = std::log(n);
    const double decay = std::exp(-0.5 * a * L);  // n^{-a/2}
    double harm;                                    // n^{a/2-1} H_a(n)
    if (a == 1.0)
        harm = decay * (1.0 + L);
    else
        harm = std::exp((0.5 * a - 1.0) * L) * (1.0 - 1.0 / (1.0 - a)) + decay / (1.0 - a);
    return 2.0 * (decay * (2.0 + 2.0 * L + 2.0 / a) + 2.0 * harm);
}

CsReport c_s_report(double s, index_t n_max) {
    if (!(s > -0.5 && s <= 0.0)) throw PreconditionError("c_s needs -1/2 < s <= 0");
    CsReport r;
    r.s = s;
    r.n_max = n_max;
    for (index_t n = 1; n <= n_max; ++n) {
        const double v = c_s_profile(n, s);
        if (v > r.finite_sup) {
            r.finite_sup = v;
            r.argmax = n;
        }
    }
    const double a = 1.0 - 2.0 * std::abs(s);
    const double L0 = std::log(static_cast<double>(n_max + 1));
    const double L1 = L0 + std::min(60.0 / a, 4000.0);
    for (double L = L0; L <= L1; L += 0.01)
        r.tail_bound = std::max(r.tail_bound, c_s_profile_bound(std::exp(std::min(L, 700.0)), s));
    r.value = std::max(r.finite_sup, r.tail_bound);
    return r;
}

namespace {

std::mutex g_const_mu;
std::map<double, double> g_cs_cache;
std::map<double, CsPrimeReport> g_csp_cache;

}  // namespace

double estimate_c_s(double s) {
    {
        std::lock_guard<std::mutex> lk(g_const_mu);
        auto it = g_cs_cache.find(s);
        if (it != g_cs_cache.end()) return it->second;
    }
    const double v = c_s_report(s).value;
    std::lock_guard<std::mutex> lk(g_const_mu);
    g_cs_cache[s] = v;
    return v;
}

double epsilon_s(index_t n, double s) {
    const double nn = static_cast<double>(n);
    return std::max(std::log(bracket(n)) / nn, std::pow(nn, -(1.0 - std::abs(s))));
}

CsPrimeReport c_s_prime_report(double s) {
    {
        std::lock_guard<std::mutex> lk(g_const_mu);
        auto it = g_csp_cache.find(s);
        if (it != g_csp_cache.end()) return it->second;
    }
    CsPrimeReport r;
    r.c_s = estimate_c_s(s);
    const double sigma = 1.0 - std::abs(s);
    std::vector<index_t> ns;
    for (index_t n = 1; n <= 512; ++n) ns.push_back(n);
    for (index_t n = 1024; n <= 65536; n *= 2) ns.push_back(n);
    for (index_t n : ns) {
        const double v = 2.0 * std::pow(bracket(2 * n), s) * hilbert_sum(n, sigma, 4096) / epsilon_s(n, s);
        if (v > r.finite_sup) {
            r.finite_sup = v;
            r.argmax = n;
        }
    }
    if (s < 0.0) r.limit = std::pow(2.0, 1.0 + s) * hilbert_asymptotic_constant(sigma);
    r.value = std::max({r.c_s, r.finite_sup, r.limit});
    std::lock_guard<std::mutex> lk(g_const_mu);
    g_csp_cache[s] = r;
    return r;
}

double estimate_c_s_prime(double s) { return c_s_prime_report(s).value; }

namespace {

// smallest n >= 1 with lhs <= n^beta, starting from the closed-form guess
index_t smallest_power_n(double lhs, double beta) {
    if (lhs <= 1.0) return 1;
    const double guess = std::ceil(std::pow(lhs, 1.0 / beta));
    if (!(guess < 1e15)) throw ThresholdError("threshold beyond representable range");
    auto n = static_cast<index_t>(guess);
    auto ok = [&](index_t k) { return lhs <= std::pow(static_cast<double>(k), beta); };
    while (n > 1 && ok(n - 1)) --n;
    while (!ok(n)) ++n;
    return n;
}

}  // namespace

index_t contraction_threshold(double c_s, double q_norm, double s) {
    return smallest_power_n(2.0 * c_s * q_norm, 0.5 - std::abs(s));
}

Thresholds thresholds(const Potential& q, double s, const Weight& w, double m) {
    if (!(s > -0.5 && s <= 0.0)) throw PreconditionError("reduction needs -1/2 < s <= 0");
    Thresholds t;
    t.c_s = estimate_c_s(s);
    t.c_s_prime = estimate_c_s_prime(s);
    t.q_norm = sup_norm(q.seq, w, s);
    if (t.q_norm > m * (1.0 + 1e-12)) throw PreconditionError("||q||_{w,s,infty} exceeds m");
    const double beta = 0.5 - std::abs(s);
    t.n_s = contraction_threshold(t.c_s, t.q_norm, s);
    // 16 c' m / n^beta <= 1/2  and  8 c' / n^beta <= 1/(16 m)
    t.N_ms = std::max(t.n_s, smallest_power_n(32.0 * t.c_s_prime * m, beta));
    t.M_ms = std::max(t.N_ms, smallest_power_n(128.0 * t.c_s_prime * m, beta));
    return t;
}

ReductionContext make_context(const Potential& q, double s, const Weight& w, double m, ReductionOptions opt) {
    ReductionContext ctx;
    ctx.q = q;
    ctx.s = s;
    ctx.w = w;
    ctx.m = m;
    ctx.opt = opt;
    ctx.th = thresholds(q, s, w, m);
    return ctx;
}

// ---------------------------------------------------------------- operators

namespace {

cplx to_offset(index_t n, cplx lambda) { return lambda - mode_symbol(n); }

}  // namespace

FourierSeq apply_T_n_offset(const ReductionContext& ctx, index_t n, cplx delta, const FourierSeq& f) {
    const FourierSeq g = apply_A_inv_Q_offset(n, delta, f);
    return convolve(ctx.q.seq, g, ctx.K());
}

FourierSeq apply_T_n(const ReductionContext& ctx, index_t n, cplx lambda, const FourierSeq& f) {
    return apply_T_n_offset(ctx, n, to_offset(n, lambda), f);
}

double shift_norm_pm(const ReductionContext& ctx, index_t n, const FourierSeq& g) {
    return std::max(shifted_norm(g, ctx.w, ctx.s, n), shifted_norm(g, ctx.w, ctx.s, -n));
}

NeumannResult neumann_K_n_offset(const ReductionContext& ctx, index_t n, cplx delta, const FourierSeq& f) {
    check_strip(n, delta);
    NeumannResult r;
    r.sum = f;
    r.terms_used = 1;
    const double f_norm = shift_norm_pm(ctx, n, f);
    if (f_norm == 0.0) return r;
    const double prune_at = ctx.opt.prune_rel * f.max_abs();
    FourierSeq term = f;
    double prev = f_norm;
    int bad = 0;
    bool converged = false;
    for (int l = 1; l < ctx.opt.max_terms; ++l) {
        term = apply_T_n_offset(ctx, n, delta, term);
        term.prune(prune_at);
        const double t_norm = shift_norm_pm(ctx, n, term);
        if (t_norm == 0.0) {
            converged = true;
            break;
        }
        const double ratio = t_norm / prev;
        r.max_ratio = std::max(r.max_ratio, ratio);
        bad = ratio > 0.9 ? bad + 1 : 0;
        if (bad >= 3)
            throw ContractionFailure("Neumann series for n=" + std::to_string(n) +
                                     " is not contracting; n is below the true threshold");
        r.sum = r.sum + term;
        ++r.terms_used;
        if (t_norm < ctx.opt.neumann_tol * f_norm) {
            converged = true;
            break;
        }
        prev = t_norm;
    }
    if (!converged)
        throw ContractionFailure("Neumann series for n=" + std::to_string(n) + " did not reach tolerance in " +
                                 std::to_string(ctx.opt.max_terms) + " terms");
    return r;
}

NeumannResult neumann_K_n(const ReductionContext& ctx, index_t n, cplx lambda, const FourierSeq& f) {
    return neumann_K_n_offset(ctx, n, to_offset(n, lambda), f);
}

FourierSeq V_unit(const ReductionContext& ctx, index_t j) {
    std::vector<std::pair<index_t, cplx>> e;
    e.reserve(ctx.q.seq.nnz());
    for (std::size_t i = 0; i < ctx.q.seq.nnz(); ++i) e.emplace_back(ctx.q.seq.indices()[i] + j, ctx.q.seq.values()[i]);
    return FourierSeq::from_pairs(ctx.K(), std::move(e));
}

Coefficients coefficients_offset(const ReductionContext& ctx, index_t n, cplx delta) {
    Coefficients c;
    const NeumannResult plus = neumann_K_n_offset(ctx, n, delta, V_unit(ctx, n));
    const NeumannResult minus = neumann_K_n_offset(ctx, n, delta, V_unit(ctx, -n));
    c.a_n = plus.sum[n];
    c.b_neg_n = plus.sum[-n];
    c.b_n = minus.sum[n];
    c.a_neg_n = minus.sum[-n];
    c.terms_used = std::max(plus.terms_used, minus.terms_used);
    c.KVe_plus = plus.sum;
    c.KVe_minus = minus.sum;
    return c;
}

Coefficients coefficients(const ReductionContext& ctx, index_t n, cplx lambda) {
    return coefficients_offset(ctx, n, to_offset(n, lambda));
}

cplx det_B_offset(const ReductionContext& ctx, index_t n, cplx delta) {
    const Coefficients c = coefficients_offset(ctx, n, delta);
    return (delta - c.a_n) * (delta - c.a_neg_n) - c.b_n * c.b_neg_n;
}

std::vector<FourierSeq> random_probes(const ReductionContext& ctx, index_t n, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ull));
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const index_t span = 2 * n + 2 * std::max<index_t>(ctx.q.band(), 1) * 2 + 8;
    std::vector<FourierSeq> out;
    for (int p = 0; p < count; ++p) {
        std::vector<std::pair<index_t, cplx>> e;
        const double density = 0.1 + 0.9 * u(rng);
        for (index_t k = -span; k <= span; ++k)
            if (u(rng) < density) e.emplace_back(k, cplx(g(rng), g(rng)));
        if (e.empty()) e.emplace_back(0, 1.0);
        out.push_back(FourierSeq::from_pairs(ctx.K(), std::move(e)));
    }
    return out;
}

std::vector<double> contraction_ratios(const ReductionContext& ctx, index_t n, cplx delta,
                                       const std::vector<FourierSeq>& probes) {
    std::vector<double> out;
    out.reserve(probes.size());
    for (const auto& f : probes) {
        const FourierSeq Tf = apply_T_n_offset(ctx, n, delta, f);
        double r = 0.0;
        for (index_t l : {n, -n}) {
            const double den = shifted_norm(f, ctx.w, ctx.s, l);
            if (den > 0.0) r = std::max(r, shifted_norm(Tf, ctx.w, ctx.s, l) / den);
        }
        out.push_back(r);
    }
    return out;
}

TNormSample sample_T_norm(const ReductionContext& ctx, index_t n, cplx delta, const std::vector<FourierSeq>& extra,
                          std::uint64_t seed) {
    std::vector<FourierSeq> probes;
    // 32 unit masses next to +-n, 32 at log-spaced indices
    for (index_t d = 1; d <= 8; ++d)
        for (index_t c : {n, -n}) {
            probes.push_back(FourierSeq::unit(ctx.K(), c + d));
            probes.push_back(FourierSeq::unit(ctx.K(), c - d));
        }
    const double top = std::log(static_cast<double>(8 * n + 64));
    for (int i = 0; i < 16; ++i) {
        const auto k = static_cast<index_t>(std::llround(std::exp(top * i / 15.0)));
        probes.push_back(FourierSeq::unit(ctx.K(), k));
        probes.push_back(FourierSeq::unit(ctx.K(), -k));
    }
    const auto rnd = random_probes(ctx, n, 16, seed);
    probes.insert(probes.end(), rnd.begin(), rnd.end());
    probes.insert(probes.end(), extra.begin(), extra.end());

    TNormSample s;
    s.probes = static_cast<int>(probes.size());
    for (const auto& f : probes) {
        const FourierSeq Tf = apply_T_n_offset(ctx, n, delta, f);
        const double dp = shifted_norm(f, ctx.w, ctx.s, n), dm = shifted_norm(f, ctx.w, ctx.s, -n);
        if (dp > 0.0) s.ratio_plus = std::max(s.ratio_plus, shifted_norm(Tf, ctx.w, ctx.s, n) / dp);
        if (dm > 0.0) s.ratio_minus = std::max(s.ratio_minus, shifted_norm(Tf, ctx.w, ctx.s, -n) / dm);
    }
    s.max_ratio = std::max(s.ratio_plus, s.ratio_minus);
    return s;
}

// ---------------------------------------------------------------- alpha

AlphaResult alpha_iterate(const ReductionContext& ctx, index_t n) {
    AlphaResult r;
    cplx delta = 0.0;
    double prev_step = kInf;
    int slow = 0;
    for (int it = 1; it <= 200; ++it) {
        const cplx next = coefficients_offset(ctx, n, delta).a_n;
        const double step = std::abs(next - delta);
        delta = next;
        r.iterations = it;
        if (step <= 1e-14 * std::max(1.0, std::abs(delta))) break;
        if (prev_step < kInf && prev_step > 1e-11 * std::max(1.0, std::abs(delta)) && step > 0.5 * prev_step) {
            if (++slow >= 3)
                throw ThresholdError("alpha iteration does not contract for n=" + std::to_string(n));
        } else {
            slow = 0;
        }
        prev_step = step;
    }
    r.delta = delta;
    r.alpha = mode_symbol(n) + delta;
    r.residual = std::abs(delta - coefficients_offset(ctx, n, delta).a_n);
    return r;
}

AlphaResult alpha_fixed_point(const ReductionContext& ctx, index_t n) {
    if (n < ctx.N_ms())
        throw PreconditionError("alpha fixed point needs n >= N_ms = " + std::to_string(ctx.N_ms()));
    return alpha_iterate(ctx, n);
}

// ---------------------------------------------------------------- roots

namespace {

cplx pick_branch(cplx prod, cplx near) {
    const cplx r = std::sqrt(prod);
    return std::abs(r - near) <= std::abs(-r - near) ? r : -r;
}

struct NewtonOut {
    bool ok = false;
    cplx delta = 0.0;
    int steps = 0;
};

// Newton on g(delta) = delta - a_n(delta) - phi(delta), phi a continuous branch
// of sqrt(b_n b_{-n}) started at phi0.
NewtonOut newton_factor(const ReductionContext& ctx, index_t n, cplx seed, cplx phi0) {
    NewtonOut out;
    const double R = disc_radius(n);
    const double h = 1e-4 * static_cast<double>(n);
    cplx delta = seed, phi = phi0;
    auto g = [&](cplx d, cplx& phi_ref) {
        const Coefficients c = coefficients_offset(ctx, n, d);
        phi_ref = pick_branch(c.b_n * c.b_neg_n, phi_ref);
        return d - c.a_n - phi_ref;
    };
    for (int it = 0; it < 50; ++it) {
        out.steps = it + 1;
        cplx phi_c = phi, phi_p = phi, phi_m = phi;
        const cplx g0 = g(delta, phi_c);
        const cplx gp = g(delta + h, phi_p);
        const cplx gm = g(delta - h, phi_m);
        const cplx dg = (gp - gm) / (2.0 * h);
        if (dg == cplx(0.0)) return out;
        const cplx step = g0 / dg;
        delta -= step;
        phi = phi_c;
        if (!(std::abs(delta) <= R)) return out;
        if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(delta))) {
            out.ok = true;
            out.delta = delta;
            return out;
        }
    }
    return out;
}

struct ContourData {
    int winding = 0;
    cplx p1 = 0.0, p2 = 0.0;  // sums of roots and of squared roots
};

ContourData contour_scan(const ReductionContext& ctx, index_t n, int points, bool moments) {
    ContourData cd;
    const double R = disc_radius(n);
    const double h = 1e-4 * static_cast<double>(n);
    double total_arg = 0.0;
    cplx prev = 0.0, first = 0.0;
    for (int j = 0; j <= points; ++j) {
        const cplx z = std::polar(R, 2.0 * kPi * (j % points) / points);
        const cplx d = det_B_offset(ctx, n, z);
        if (d == cplx(0.0)) throw LocalizationError("det B_n vanishes on the boundary of D_n");
        if (j == 0) {
            first = d;
        } else {
            total_arg += std::arg(d / prev);
        }
        prev = d;
        if (moments && j < points) {
            const cplx dd = (det_B_offset(ctx, n, z + h) - det_B_offset(ctx, n, z - h)) / (2.0 * h);
            // (1/2 pi i) oint z^k det'/det dz with dz = i (z) dtheta
            const cplx w = dd / d * z / static_cast<double>(points);
            cd.p1 += w * z;
            cd.p2 += w * z * z;
        }
    }
    (void)first;
    cd.winding = static_cast<int>(std::lround(total_arg / (2.0 * kPi)));
    return cd;
}

bool polish_det(const ReductionContext& ctx, index_t n, cplx& delta) {
    const double h = 1e-4 * static_cast<double>(n);
    for (int it = 0; it < 50; ++it) {
        const cplx d0 = det_B_offset(ctx, n, delta);
        const cplx dd = (det_B_offset(ctx, n, delta + h) - det_B_offset(ctx, n, delta - h)) / (2.0 * h);
        if (dd == cplx(0.0)) return d0 == cplx(0.0);
        const cplx step = d0 / dd;
        delta -= step;
        if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(delta))) return true;
    }
    return false;
}

bool lex_less(cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

}  // namespace

int winding_number(const ReductionContext& ctx, index_t n, int points) {
    return contour_scan(ctx, n, points, false).winding;
}

RootResult find_roots(const ReductionContext& ctx, index_t n) {
    if (n < ctx.n_s()) throw PreconditionError("find_roots needs n >= n_s = " + std::to_string(ctx.n_s()));
    RootResult r;
    r.alpha = alpha_iterate(ctx, n);
    const Coefficients c0 = coefficients_offset(ctx, n, r.alpha.delta);
    const double ratio = c0.b_neg_n == cplx(0.0) ? kInf : std::abs(c0.b_n / c0.b_neg_n);
    const bool branch_ok = std::isfinite(ratio) && ratio >= 1.0 / 9.0 && ratio <= 9.0;

    bool done = false;
    if (branch_ok) {
        const cplx phi0 = std::sqrt(c0.b_n * c0.b_neg_n);
        const NewtonOut p = newton_factor(ctx, n, r.alpha.delta + phi0, phi0);
        const NewtonOut m = newton_factor(ctx, n, r.alpha.delta - phi0, -phi0);
        r.newton_steps = p.steps + m.steps;
        if (p.ok && m.ok) {
            const bool merged = std::abs(p.delta - m.delta) < 1e-9;
            // two factors landing on one root while the seeds were well apart
            if (!merged || std::abs(phi0) < 1e-6) {
                r.delta1 = p.delta;
                r.delta2 = m.delta;
                done = true;
            }
        }
    }
    if (!done) {
        r.used_fallback = true;
        const ContourData cd = contour_scan(ctx, n, 256, true);
        r.winding = cd.winding;
        if (cd.winding != 2)
            throw LocalizationError("det B_n has " + std::to_string(cd.winding) + " zeros in D_n for n=" +
                                    std::to_string(n));
        const cplx disc = std::sqrt(2.0 * cd.p2 - cd.p1 * cd.p1);
        r.delta1 = 0.5 * (cd.p1 + disc);
        r.delta2 = 0.5 * (cd.p1 - disc);
        if (std::abs(r.delta1 - r.delta2) > 1e-6) {
            if (!polish_det(ctx, n, r.delta1) || !polish_det(ctx, n, r.delta2))
                throw RootError("Newton polish of contour roots failed for n=" + std::to_string(n));
        }
    }
    if (lex_less(r.delta2, r.delta1)) std::swap(r.delta1, r.delta2);
    r.degenerate = std::abs(r.delta1 - r.delta2) < 1e-9;
    r.xi1 = mode_symbol(n) + r.delta1;
    r.xi2 = mode_symbol(n) + r.delta2;
    r.residual = std::max(std::abs(det_B_offset(ctx, n, r.delta1)), std::abs(det_B_offset(ctx, n, r.delta2)));

    // |xi_1 - xi_2| <= sqrt(6) sup_{D_n} |b_n b_{-n}|^{1/2}, sup over 16 points
    const double R = disc_radius(n);
    double sup = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const cplx z = std::polar(R * i / 3.0, kPi / 2.0 * j + kPi / 4.0 * i);
            const Coefficients c = coefficients_offset(ctx, n, z);
            sup = std::max(sup, std::sqrt(std::abs(c.b_n * c.b_neg_n)));
        }
    r.xi_bound = std::sqrt(6.0) * sup;
    r.xi_bound_ok = std::abs(r.gap()) <= r.xi_bound * (1.0 + 1e-9) + 1e-14;
    return r;
}

// ---------------------------------------------------------------- adapted map

AdaptedResult adapted_coefficients(const ReductionContext& ctx, index_t n_max) {
    AdaptedResult out;
    out.M = ctx.M_ms();
    if (n_max <= 0) n_max = std::max(out.M, ctx.q.band()) + 4;
    if (n_max < out.M) throw PreconditionError("adapted map truncation must cover n >= M_ms");
    out.n_max = n_max;
    const index_t K = std::max(ctx.q.seq.half_range(), 2 * n_max);
    FourierSeq r = ctx.q.seq.truncated(K);
    for (index_t n = out.M; n <= n_max; ++n) {
        const AlphaResult a = alpha_fixed_point(ctx, n);
        const Coefficients c = coefficients_offset(ctx, n, a.delta);
        r.set(2 * n, c.b_n);
        r.set(-2 * n, c.b_neg_n);
        out.alphas.push_back(a);
    }
    SeqFlags fl{false, true, true};
    if (ctx.q.is_real()) {
        fl.real = true;
        try {
            FourierSeq probe = r;
            probe.set_flags(fl);
            probe.validate(1e-12);
        } catch (const InvalidSequence&) {
            fl.real = false;
        }
    }
    r.set_flags(fl);
    out.r = r;
    return out;
}

SandwichReport gap_sandwich(const ReductionContext& ctx, index_t n, const FourierSeq& r, cplx gamma_n) {
    SandwichReport s;
    s.n = n;
    if (n < ctx.M_ms()) {
        s.status = "below M_ms";
        return s;
    }
    const cplx rp = r[2 * n], rm = r[-2 * n];
    s.lo = std::abs(rp * rm);
    s.mid = std::norm(gamma_n);
    s.hi = 9.0 * s.lo;
    if (std::abs(gamma_n) < 1e-9) {
        s.degenerate = true;
        s.status = "degenerate gap";
        return s;
    }
    if (rm == cplx(0.0)) {
        s.status = "condition not met: r_{-2n} = 0";
        return s;
    }
    const double ratio = std::abs(rp / rm);
    if (ratio < 1.0 / 9.0 || ratio > 9.0) {
        s.status = "condition not met: |r_{2n}/r_{-2n}| outside [1/9, 9]";
        return s;
    }
    s.condition_met = true;
    const double slack = 1e-8;
    s.pass = s.lo <= s.mid * (1.0 + slack) && s.mid <= s.hi * (1.0 + slack);
    s.status = s.pass ? "pass" : "fail";
    return s;
}

// ---------------------------------------------------------------- eigenfunctions

std::pair<cplx, cplx> kernel_vector(const ReductionContext& ctx, index_t n, cplx xi) {
    const cplx d = xi - mode_symbol(n);
    const Coefficients c = coefficients_offset(ctx, n, d);
    const cplx B11 = d - c.a_n, B12 = -c.b_n, B21 = -c.b_neg_n, B22 = d - c.a_neg_n;
    std::pair<cplx, cplx> u;
    const double r1 = std::abs(B11) + std::abs(B12), r2 = std::abs(B21) + std::abs(B22);
    if (std::max(r1, r2) == 0.0) return {1.0, 0.0};
    if (r1 >= r2)
        u = {-B12, B11};
    else
        u = {B22, -B21};
    const double sc = std::max(std::abs(u.first), std::abs(u.second));
    return {u.first / sc, u.second / sc};
}

EigenfunctionResult eigenfunction_reconstruct(const ReductionContext& ctx, index_t n, cplx xi,
                                              std::pair<cplx, cplx> u) {
    const cplx d = xi - mode_symbol(n);
    const Coefficients c = coefficients_offset(ctx, n, d);
    const cplx Bu1 = (d - c.a_n) * u.first - c.b_n * u.second;
    const cplx Bu2 = -c.b_neg_n * u.first + (d - c.a_neg_n) * u.second;
    EigenfunctionResult out;
    const double unorm = std::max(std::abs(u.first), std::abs(u.second));
    if (unorm == 0.0) throw PreconditionError("kernel vector u is zero");
    out.kernel_residual = std::max(std::abs(Bu1), std::abs(Bu2)) / unorm;
    if (out.kernel_residual > 1e-6)
        throw PreconditionError("u is not in the kernel of B_n(xi): residual " + std::to_string(out.kernel_residual));

    // v = A^{-1} Q K V u, with K V u = u_n K V e_n + u_{-n} K V e_{-n}
    const FourierSeq KVu = c.KVe_plus.scaled(u.first) + c.KVe_minus.scaled(u.second);
    const FourierSeq v = apply_A_inv_Q_offset(n, d, KVu);
    FourierSeq uu = FourierSeq::from_pairs(ctx.K(), {{n, u.first}, {-n, u.second}});
    out.f = uu + v;

    // (L - xi) f = ((k pi)^2 - xi) f_k + (q * f)_k
    FourierSeq res = convolve(ctx.q.seq, out.f, ctx.K());
    std::vector<std::pair<index_t, cplx>> e;
    for (std::size_t i = 0; i < out.f.nnz(); ++i) {
        const index_t k = out.f.indices()[i];
        e.emplace_back(k, (mode_symbol(k) - xi) * out.f.values()[i]);
    }
    res = res + FourierSeq::from_pairs(ctx.K(), std::move(e));
    const double fn = sup_norm(out.f, ctx.w, ctx.s - 2.0);
    out.residual = sup_norm(res, ctx.w, ctx.s - 2.0) / fn;
    out.regularity = sup_norm(v, Weight{}, ctx.s + 2.0);
    return out;
}

ReductionResult reduce(const ReductionContext& ctx, index_t n) {
    ReductionResult r;
    r.n = n;
    if (n < ctx.n_s()) {
        r.below_threshold = true;
        return r;
    }
    const RootResult roots = find_roots(ctx, n);
    const Coefficients c = coefficients_offset(ctx, n, roots.alpha.delta);
    r.a_n = c.a_n;
    r.b_n = c.b_n;
    r.b_neg_n = c.b_neg_n;
    r.alpha_n = roots.alpha.alpha;
    r.xi_1 = roots.xi1;
    r.xi_2 = roots.xi2;
    r.gap_estimate = std::abs(roots.gap());
    r.neumann_terms_used = c.terms_used;
    const std::vector<FourierSeq> extra{c.KVe_plus, c.KVe_minus, V_unit(ctx, n), V_unit(ctx, -n)};
    r.contraction_bound = sample_T_norm(ctx, n, roots.alpha.delta, extra).max_ratio;
    return r;
}

}  // namespace hillspec
