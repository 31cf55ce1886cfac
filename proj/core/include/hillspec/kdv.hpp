#pragma once

#include <vector>

#include "hillspec/galerkin.hpp"
#include "hillspec/hill_operator.hpp"

namespace hillspec {

// u(x) = sum_{|k| <= K} u_hat[k + K] e^{2 pi i k x} on R/Z.
struct PDEState {
    index_t K = 0;
    std::vector<cplx> u_hat;
    double t = 0.0;
    double dt = 0.0;               // 0 picks the default step
    index_t dealias_cutoff = 0;    // 0 picks floor(2K/3)

    PDEState() = default;
    explicit PDEState(index_t half_range);

    cplx operator[](index_t k) const { return u_hat[static_cast<std::size_t>(k + K)]; }
    cplx& operator[](index_t k) { return u_hat[static_cast<std::size_t>(k + K)]; }
    index_t cutoff() const;
    double max_abs_coeff() const;
};

// PDE mode k on R/Z is spectral mode 2k on R/2Z, same coefficient.
inline index_t spectral_index(index_t pde_mode) { return 2 * pde_mode; }
PDEState pde_state_from_potential(const Potential& q, index_t K);
Potential potential_from_pde_state(const PDEState& u);

// u = a cos(2 pi x)
PDEState cosine_state(double a, index_t K);

PDEState evolve_airy(const PDEState& u0, double t);

// 0.2 / (6 max|u| 2 pi cutoff), capped at 1e-4
double default_dt(const PDEState& u);

// du/dt = -u_xxx + 6 u u_x by integrating-factor RK4; t_end may be negative.
PDEState evolve_kdv(const PDEState& u0, double t_end);

struct RefinedEvolution {
    PDEState u;
    double dt = 0.0;          // step of the returned solution
    int halvings = 0;
    double self_error = 0.0;  // max |u(dt) - u(dt/2)| / max |u(dt/2)|
};

// Halves dt from default_dt (or u0.dt) until two successive solutions agree
// to tol; throws InstabilityError after max_halvings.
RefinedEvolution evolve_kdv_refined(const PDEState& u0, double t_end, double tol = 1e-9, int max_halvings = 14);

struct Conserved {
    cplx mean = 0.0;
    double L2 = 0.0;
    double hamiltonian = 0.0;  // int 1/2 u_x^2 + u^3
};

Conserved conserved(const PDEState& u);

struct DriftRow {
    index_t n = 0;
    double lambda_minus_drift = 0.0;
    double lambda_plus_drift = 0.0;
    double gamma_drift = 0.0;
    double mu_motion = 0.0;
};

struct DriftReport {
    double t = 0.0;
    index_t K_spec = 0;
    index_t n_max = 0;
    std::vector<DriftRow> rows;
    double max_periodic_drift = 0.0;  // includes lambda_0^+
    double max_gamma_drift = 0.0;
    double max_mu_motion = 0.0;
    Conserved start{}, end{};
};

// n_max <= 0 uses min(10, trust count).  dt <= 0 selects evolve_kdv_refined.
// The band of q0 must lie within the de-aliasing cutoff of K_pde.
DriftReport isospectral_check(const Potential& q0, double t, index_t K_spec, index_t K_pde = 64, double dt = 0.0,
                              index_t n_max = 0);

struct AiryDemoRow {
    double t = 0.0;
    double sup_distance = 0.0;            // ||S(t)q - q||_{s,infty}
    double max_component_distance = 0.0;  // max over 1 <= n <= window of |q_2n(t) - q_2n|
};

struct AiryDemoReport {
    std::vector<AiryDemoRow> rows;
    double sup_floor = 0.0;                 // min over t of sup_distance
    std::vector<double> component_slopes;   // log-log slope in t, n = 1..window
    index_t window = 0;
};

// q_{2n} = level <2n>^{-s} for 1 <= |n| <= n_max, moved by the Airy flow.
// Component slopes use the times with (2 pi n)^3 t <= 0.5.
AiryDemoReport airy_norm_demo(double s, double level, index_t n_max, const std::vector<double>& ts,
                              index_t window = 3);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hillspec
