#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hillspec/hill_operator.hpp"

namespace hillspec {

struct SpectrumResult {
    index_t K = 0;
    std::vector<cplx> periodic;   // lambda_0^+, lambda_1^-, lambda_1^+, ...
    std::vector<cplx> dirichlet;  // mu_1, mu_2, ...
    index_t trust_count = 0;

    bool has_periodic() const { return !periodic.empty(); }
    bool has_dirichlet() const { return !dirichlet.empty(); }
    cplx lambda_minus(index_t n) const { return periodic.at(static_cast<std::size_t>(2 * n - 1)); }
    cplx lambda_plus(index_t n) const { return periodic.at(static_cast<std::size_t>(2 * n)); }
    cplx mu(index_t n) const { return dirichlet.at(static_cast<std::size_t>(n - 1)); }
};

// Largest n with 4 (n^2 pi^2 + 12 n) < ((K - 2) pi)^2.
index_t trust_count_for(index_t K);

// Lexicographic order; real parts within 1e-10 max(1, |Re|) count as tied and
// are ordered by imaginary part.
void lex_sort(std::vector<cplx>& v);

SpectrumResult periodic_spectrum(const Potential& q, index_t K);
SpectrumResult dirichlet_spectrum(const Potential& q, index_t K);
SpectrumResult full_spectrum(const Potential& q, index_t K);

// Dense matrices, exposed for oracles and projectors.  Rows/cols are the
// indices -K..K of one parity sector (per_plus: even, per_minus: odd), or 1..K
// for dirichlet.
Eigen::MatrixXcd sector_matrix(const Potential& q, index_t K, BoundaryCondition bc);
std::vector<index_t> sector_indices(index_t K, BoundaryCondition bc);

struct GapsMidpoints {
    std::vector<cplx> gamma;         // gamma_n, n = 1..count
    std::vector<cplx> tau;
    std::vector<cplx> tau_minus_mu;  // empty without a dirichlet part
};

GapsMidpoints gaps_and_midpoints(const SpectrumResult& spec);

// Max distance between nearest-neighbour pairs of two eigenvalue lists
// (first count entries of each).
double max_pair_distance(const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t count);

struct RieszProjector {
    index_t n = 0;
    index_t K = 0;
    int quad_points = 0;
    Eigen::MatrixXcd R;       // (2K+1)x(2K+1), rows/cols k = -K..K
    double idempotency = 0.0; // max-abs entry of R^2 - R
    cplx trace = 0.0;
};

// Trapezoidal quadrature of (lambda - M)^{-1} on |lambda - n^2 pi^2| = n,
// applied in the eigenbasis of M.  quad_points doubles until R^2 - R < 1e-6.
RieszProjector riesz_projector(const Potential& q, index_t n, index_t K, int quad_points = 64);

// Same quadrature by direct resolvent solves at each node; O(quad_points K^3).
Eigen::MatrixXcd riesz_projector_direct(const Potential& q, index_t n, index_t K, int quad_points);

// ||R - P_n|| as an operator L^2 -> L^infty on R/2Z, sup over an x grid of
// grid_factor (2K+1) points.
double projector_distance(const RieszProjector& p, int grid_factor = 8);

struct DecayRow {
    index_t K = 0;
    index_t trust = 0;
    double gap_sup = 0.0;      // sup_n w_{2n} <2n>^s |gamma_n|
    double mid_sup = 0.0;      // sup_n w_{2n} <2n>^s |tau_n - mu_n|
};

struct DecayReport {
    std::vector<DecayRow> rows;
    double gap_rel_change = 0.0;  // between the last two truncations
    double mid_rel_change = 0.0;
    double q_norm = 0.0;
    // tail bound check at N
    index_t N = 0;
    double tail_lhs = 0.0;
    double tail_rhs = 0.0;
    bool tail_ok = true;
    double c_s = 0.0;
};

// N <= 0 selects the contraction threshold n_s of q.
DecayReport verify_decay(const Potential& q, const Weight& w, double s, const std::vector<index_t>& K_list,
                         index_t N = 0);

}  // namespace hillspec
