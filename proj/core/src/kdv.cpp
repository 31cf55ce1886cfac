#include "hillspec/kdv.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "hillspec/birkhoff.hpp"

namespace hillspec {

PDEState::PDEState(index_t half_range) : K(half_range), u_hat(static_cast<std::size_t>(2 * half_range + 1)) {}

index_t PDEState::cutoff() const { return dealias_cutoff > 0 ? dealias_cutoff : (2 * K) / 3; }

double PDEState::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& v : u_hat) m = std::max(m, std::abs(v));
    return m;
}

PDEState pde_state_from_potential(const Potential& q, index_t K) {
    PDEState u(K);
    for (std::size_t i = 0; i < q.seq.nnz(); ++i) {
        const index_t k = q.seq.indices()[i];
        if (k % 2 != 0) throw UnsupportedInput("potential is not 1-periodic");
        if (std::abs(k / 2) > K) throw TruncationError("potential band exceeds the PDE truncation");
        u[k / 2] = q.seq.values()[i];
    }
    return u;
}

Potential potential_from_pde_state(const PDEState& u) {
    std::vector<std::pair<index_t, cplx>> e;
    bool real = true;
    for (index_t k = -u.K; k <= u.K; ++k) {
        if (k == 0) continue;
        if (u[k] != cplx(0.0)) e.emplace_back(spectral_index(k), u[k]);
        if (std::abs(u[-k] - std::conj(u[k])) > 1e-12 * std::max(1.0, std::abs(u[k]))) real = false;
    }
    return Potential(FourierSeq::from_pairs(spectral_index(u.K), std::move(e), SeqFlags{real, true, true}));
}

PDEState cosine_state(double a, index_t K) {
    PDEState u(K);
    u[1] = 0.5 * a;
    u[-1] = 0.5 * a;
    return u;
}

namespace {

double dispersion(index_t k) {
    const double c = 2.0 * kPi * static_cast<double>(k);
    return c * c * c;
}

std::mutex g_plan_mu;  // the FFTW planner is not thread-safe

// Forward/backward complex transforms of length N.
class FFT {
public:
    explicit FFT(int N) : N_(N) {
        in_ = fftw_alloc_complex(static_cast<std::size_t>(N));
        out_ = fftw_alloc_complex(static_cast<std::size_t>(N));
        std::lock_guard<std::mutex> lk(g_plan_mu);
        fwd_ = fftw_plan_dft_1d(N, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(N, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FFT() {
        std::lock_guard<std::mutex> lk(g_plan_mu);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(in_);
        fftw_free(out_);
    }
    FFT(const FFT&) = delete;
    FFT& operator=(const FFT&) = delete;

    // coefficients (|k| <= Kc, position k + Kc) -> grid values
    void to_grid(const std::vector<cplx>& c, index_t Kc, std::vector<cplx>& grid) {
        for (int j = 0; j < N_; ++j) in_[j][0] = in_[j][1] = 0.0;
        for (index_t k = -Kc; k <= Kc; ++k) {
            const cplx v = c[static_cast<std::size_t>(k + Kc)];
            const index_t j = k >= 0 ? k : k + N_;
            in_[j][0] = v.real();
            in_[j][1] = v.imag();
        }
        fftw_execute(bwd_);
        grid.resize(static_cast<std::size_t>(N_));
        for (int j = 0; j < N_; ++j) grid[static_cast<std::size_t>(j)] = {out_[j][0], out_[j][1]};
    }

    // grid values -> coefficients |k| <= Kc
    void to_coeffs(const std::vector<cplx>& grid, index_t Kc, std::vector<cplx>& c) {
        for (int j = 0; j < N_; ++j) {
            in_[j][0] = grid[static_cast<std::size_t>(j)].real();
            in_[j][1] = grid[static_cast<std::size_t>(j)].imag();
        }
        fftw_execute(fwd_);
        c.assign(static_cast<std::size_t>(2 * Kc + 1), 0.0);
        for (index_t k = -Kc; k <= Kc; ++k) {
            const index_t j = k >= 0 ? k : k + N_;
            c[static_cast<std::size_t>(k + Kc)] = cplx(out_[j][0], out_[j][1]) / static_cast<double>(N_);
        }
    }

private:
    int N_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan fwd_, bwd_;
};

class KdvRhs {
public:
    KdvRhs(index_t K, index_t cutoff) : K_(K), cut_(cutoff), fft_(static_cast<int>(2 * K + 2)) {}

    // N(u)_k = 3 (2 pi i k) (u^2)_k with modes |k| > cutoff removed first
    void operator()(const std::vector<cplx>& u, std::vector<cplx>& out) {
        std::vector<cplx> v = u;
        for (index_t k = -K_; k <= K_; ++k)
            if (std::abs(k) > cut_) v[static_cast<std::size_t>(k + K_)] = 0.0;
        fft_.to_grid(v, K_, grid_);
        for (auto& g : grid_) g = g * g;
        fft_.to_coeffs(grid_, K_, sq_);
        out.resize(u.size());
        for (index_t k = -K_; k <= K_; ++k) {
            const auto i = static_cast<std::size_t>(k + K_);
            out[i] = std::abs(k) > cut_ ? cplx(0.0) : cplx(0.0, 6.0 * kPi * static_cast<double>(k)) * sq_[i];
        }
    }

private:
    index_t K_, cut_;
    FFT fft_;
    std::vector<cplx> grid_, sq_;
};

}  // namespace

PDEState evolve_airy(const PDEState& u0, double t) {
    PDEState u = u0;
    for (index_t k = -u.K; k <= u.K; ++k) u[k] *= unit_phase(dispersion(k), t);
    u.t = u0.t + t;
    return u;
}

double default_dt(const PDEState& u) {
    double umax = 0.0;
    for (const auto& v : u.u_hat) umax += std::abs(v);  // bound on max_x |u|
    const double kd = 2.0 * kPi * static_cast<double>(std::max<index_t>(u.cutoff(), 1));
    if (umax == 0.0) return 1e-4;
    return std::min(1e-4, 0.2 / (6.0 * umax * kd));
}

PDEState evolve_kdv(const PDEState& u0, double t_end) {
    PDEState u = u0;
    u[0] = u0[0];
    if (t_end == 0.0) return u;
    const double h_nominal = u0.dt > 0.0 ? u0.dt : default_dt(u0);
    const auto steps = static_cast<long>(std::ceil(std::abs(t_end) / h_nominal - 1e-9));
    const double h = t_end / static_cast<double>(steps);
    const index_t K = u.K;
    const std::size_t n = u.u_hat.size();

    // E(h/2), E(h) per mode
    std::vector<cplx> e_half(n), e_full(n);
    for (index_t k = -K; k <= K; ++k) {
        e_half[static_cast<std::size_t>(k + K)] = unit_phase(dispersion(k), 0.5 * h);
        e_full[static_cast<std::size_t>(k + K)] = unit_phase(dispersion(k), h);
    }
    KdvRhs rhs(K, u.cutoff());
    double start_norm = 0.0;
    for (const auto& v : u.u_hat) start_norm += std::norm(v);
    start_norm = std::sqrt(start_norm);

    std::vector<cplx> y = u.u_hat, k1, k2, k3, k4, tmp(n), yh(n);
    const cplx mean = y[static_cast<std::size_t>(K)];
    for (long step = 0; step < steps; ++step) {
        rhs(y, k1);
        for (std::size_t i = 0; i < n; ++i) {
            yh[i] = e_half[i] * y[i];
            tmp[i] = yh[i] + 0.5 * h * e_half[i] * k1[i];
        }
        rhs(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = yh[i] + 0.5 * h * k2[i];
        rhs(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = e_full[i] * y[i] + h * e_half[i] * k3[i];
        rhs(tmp, k4);
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = e_full[i] * y[i] + h / 6.0 * (e_full[i] * k1[i] + 2.0 * e_half[i] * (k2[i] + k3[i]) + k4[i]);
            nrm += std::norm(y[i]);
        }
        y[static_cast<std::size_t>(K)] = mean;
        nrm = std::sqrt(nrm);
        if (!std::isfinite(nrm) || nrm > 1e6 * std::max(start_norm, 1e-300))
            throw InstabilityError("KdV solution norm grew beyond 1e6 times its initial value at step " +
                                   std::to_string(step));
    }
    // keep u_hat(-k) = conj(u_hat(k)) exact for real data
    bool real = true;
    for (index_t k = 1; k <= K; ++k)
        if (u0[-k] != std::conj(u0[k])) real = false;
    if (real)
        for (index_t k = 1; k <= K; ++k) {
            const cplx avg = 0.5 * (y[static_cast<std::size_t>(K + k)] + std::conj(y[static_cast<std::size_t>(K - k)]));
            y[static_cast<std::size_t>(K + k)] = avg;
            y[static_cast<std::size_t>(K - k)] = std::conj(avg);
        }
    u.u_hat = std::move(y);
    u.t = u0.t + t_end;
    return u;
}

RefinedEvolution evolve_kdv_refined(const PDEState& u0, double t_end, double tol, int max_halvings) {
    RefinedEvolution r;
    PDEState in = u0;
    in.dt = u0.dt > 0.0 ? u0.dt : default_dt(u0);
    PDEState coarse = evolve_kdv(in, t_end);
    for (int h = 1; h <= max_halvings; ++h) {
        in.dt *= 0.5;
        PDEState fine = evolve_kdv(in, t_end);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < fine.u_hat.size(); ++i) {
            diff = std::max(diff, std::abs(fine.u_hat[i] - coarse.u_hat[i]));
            scale = std::max(scale, std::abs(fine.u_hat[i]));
        }
        r.self_error = scale > 0.0 ? diff / scale : diff;
        r.halvings = h;
        if (r.self_error <= tol) {
            r.dt = in.dt;
            r.u = std::move(fine);
            r.u.dt = u0.dt;
            return r;
        }
        coarse = std::move(fine);
    }
    throw InstabilityError("KdV step refinement did not reach tolerance " + std::to_string(tol));
}

Conserved conserved(const PDEState& u) {
    Conserved c;
    c.mean = u[0];
    double quad = 0.0;
    for (index_t k = -u.K; k <= u.K; ++k) {
        const double a = std::norm(u[k]);
        c.L2 += a;
        const double kk = 2.0 * kPi * static_cast<double>(k);
        quad += 0.5 * kk * kk * a;
    }
    // int u^3 is exact on a grid of more than 3K points
    const index_t K = u.K;
    FFT fft(static_cast<int>(4 * K + 4));
    std::vector<cplx> grid;
    fft.to_grid(u.u_hat, K, grid);
    cplx cubic = 0.0;
    for (const auto& g : grid) cubic += g * g * g;
    cubic /= static_cast<double>(grid.size());
    c.hamiltonian = quad + cubic.real();
    return c;
}

DriftReport isospectral_check(const Potential& q0, double t, index_t K_spec, index_t K_pde, double dt, index_t n_max) {
    DriftReport r;
    r.t = t;
    r.K_spec = K_spec;
    PDEState u0 = pde_state_from_potential(q0, K_pde);
    if (q0.band() > u0.cutoff())
        throw TruncationError("potential band " + std::to_string(q0.band()) + " exceeds the de-aliasing cutoff " +
                              std::to_string(u0.cutoff()));
    if (K_pde > K_spec) throw TruncationError("PDE truncation exceeds the spectral truncation");
    u0.dt = dt;
    const PDEState u1 = dt > 0.0 ? evolve_kdv(u0, t) : evolve_kdv_refined(u0, t).u;
    r.start = conserved(u0);
    r.end = conserved(u1);
    const Potential q1 = potential_from_pde_state(u1);
    const SpectrumResult s0 = full_spectrum(q0, K_spec);
    const SpectrumResult s1 = full_spectrum(q1, K_spec);
    r.n_max = n_max > 0 ? std::min(n_max, s0.trust_count) : std::min<index_t>(10, s0.trust_count);
    r.max_periodic_drift = std::abs(s1.periodic[0] - s0.periodic[0]);
    for (index_t n = 1; n <= r.n_max; ++n) {
        DriftRow row;
        row.n = n;
        row.lambda_minus_drift = std::abs(s1.lambda_minus(n) - s0.lambda_minus(n));
        row.lambda_plus_drift = std::abs(s1.lambda_plus(n) - s0.lambda_plus(n));
        row.gamma_drift = std::abs((s1.lambda_plus(n) - s1.lambda_minus(n)) - (s0.lambda_plus(n) - s0.lambda_minus(n)));
        row.mu_motion = std::abs(s1.mu(n) - s0.mu(n));
        r.max_periodic_drift = std::max({r.max_periodic_drift, row.lambda_minus_drift, row.lambda_plus_drift});
        r.max_gamma_drift = std::max(r.max_gamma_drift, row.gamma_drift);
        r.max_mu_motion = std::max(r.max_mu_motion, row.mu_motion);
        r.rows.push_back(row);
    }
    return r;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw PreconditionError("slope fit needs two or more points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

AiryDemoReport airy_norm_demo(double s, double level, index_t n_max, const std::vector<double>& ts, index_t window) {
    AiryDemoReport r;
    r.window = window;
    PDEState u0(n_max);
    for (index_t n = 1; n <= n_max; ++n) {
        const double c = level * std::pow(bracket(spectral_index(n)), -s);
        u0[n] = c;
        u0[-n] = c;
    }
    std::vector<std::vector<double>> lx(static_cast<std::size_t>(window)), ly(static_cast<std::size_t>(window));
    r.sup_floor = kInf;
    for (double t : ts) {
        const PDEState u = evolve_airy(u0, t);
        AiryDemoRow row;
        row.t = t;
        for (index_t n = 1; n <= n_max; ++n) {
            const double d = std::max(std::abs(u[n] - u0[n]), std::abs(u[-n] - u0[-n]));
            row.sup_distance = std::max(row.sup_distance, std::pow(bracket(spectral_index(n)), s) * d);
            if (n <= window) {
                row.max_component_distance = std::max(row.max_component_distance, d);
                if (dispersion(n) * t <= 0.5 && d > 0.0) {
                    lx[static_cast<std::size_t>(n - 1)].push_back(std::log(t));
                    ly[static_cast<std::size_t>(n - 1)].push_back(std::log(d));
                }
            }
        }
        r.sup_floor = std::min(r.sup_floor, row.sup_distance);
        r.rows.push_back(row);
    }
    for (index_t n = 1; n <= window; ++n) {
        const auto i = static_cast<std::size_t>(n - 1);
        r.component_slopes.push_back(lx[i].size() >= 2 ? fit_slope(lx[i], ly[i]) : std::nan(""));
    }
    return r;
}

}  // namespace hillspec
