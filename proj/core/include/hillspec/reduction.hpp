#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hillspec/hill_operator.hpp"

namespace hillspec {

// ---------------------------------------------------------------- constants

struct CsReport {
    double s = 0.0;
    double value = 0.0;        // max(finite_sup, tail_bound)
    double finite_sup = 0.0;   // sup over 1 <= n <= n_max
    index_t argmax = 0;
    double tail_bound = 0.0;   // rigorous bound for n > n_max
    index_t n_max = 0;
};

// c_s = sup_n n^{1/2-|s|} 2 sum_{|k| != n} |n+k|^{-(1-2|s|)} |n-k|^{-1}
CsReport c_s_report(double s, index_t n_max = 4096);
// The summand-sum itself, n^{1/2-|s|} 2 sum(...), at one n.
double c_s_profile(index_t n, double s);
// Closed-form upper bound for c_s_profile valid at every n >= 2.
double c_s_profile_bound(double n, double s);
// Memoized c_s_report(s).value.
double estimate_c_s(double s);

// eps_s(n) = max(log<n>/n, n^{-(1-|s|)})
double epsilon_s(index_t n, double s);

struct CsPrimeReport {
    double value = 0.0;
    double c_s = 0.0;
    double finite_sup = 0.0;
    index_t argmax = 0;
    double limit = 0.0;  // large-n limit of the ratio, 0 at s = 0
};

// c_s' = max(c_s, sup_n 2 <2n>^s hilbert_sum(n, 1-|s|) / eps_s(n))
CsPrimeReport c_s_prime_report(double s);
double estimate_c_s_prime(double s);

struct Thresholds {
    double c_s = 0.0;
    double c_s_prime = 0.0;
    double q_norm = 0.0;
    index_t n_s = 1;
    index_t N_ms = 1;
    index_t M_ms = 1;
};

// Smallest n >= 1 with 2 c_s qnorm <= n^{1/2-|s|}.
index_t contraction_threshold(double c_s, double q_norm, double s);
Thresholds thresholds(const Potential& q, double s, const Weight& w, double m);

// ---------------------------------------------------------------- context

struct ReductionOptions {
    double neumann_tol = 1e-12;
    int max_terms = 60;
    index_t work_half_range = index_t{1} << 40;  // K for operator application
    double prune_rel = 1e-22;
};

struct ReductionContext {
    Potential q;
    double s = 0.0;
    Weight w{};
    double m = 0.0;
    Thresholds th{};
    ReductionOptions opt{};

    double c_s() const { return th.c_s; }
    index_t n_s() const { return th.n_s; }
    index_t N_ms() const { return th.N_ms; }
    index_t M_ms() const { return th.M_ms; }
    index_t K() const { return opt.work_half_range; }
};

// Throws PreconditionError if ||q||_{w,s,infty} > m or s is outside (-1/2, 0].
ReductionContext make_context(const Potential& q, double s, const Weight& w, double m,
                              ReductionOptions opt = {});

// The disc |lambda - n^2 pi^2| <= 4 sqrt(n).
inline double disc_radius(index_t n) { return 4.0 * std::sqrt(static_cast<double>(n)); }

// ---------------------------------------------------------------- operators
// Functions taking lambda convert to the offset delta = lambda - n^2 pi^2;
// the *_offset variants take delta directly.

FourierSeq apply_T_n(const ReductionContext& ctx, index_t n, cplx lambda, const FourierSeq& f);
FourierSeq apply_T_n_offset(const ReductionContext& ctx, index_t n, cplx delta, const FourierSeq& f);

// max over shifts +-n of ||g||_{w,s,infty;l}
double shift_norm_pm(const ReductionContext& ctx, index_t n, const FourierSeq& g);

struct NeumannResult {
    FourierSeq sum;
    int terms_used = 0;
    double max_ratio = 0.0;
};

NeumannResult neumann_K_n(const ReductionContext& ctx, index_t n, cplx lambda, const FourierSeq& f);
NeumannResult neumann_K_n_offset(const ReductionContext& ctx, index_t n, cplx delta, const FourierSeq& f);

// V e_j as a sequence: entries q_{k-j} at k.
FourierSeq V_unit(const ReductionContext& ctx, index_t j);

struct Coefficients {
    cplx a_n = 0.0;      // <K V e_n, e_n>
    cplx a_neg_n = 0.0;  // <K V e_{-n}, e_{-n}>
    cplx b_n = 0.0;      // <K V e_{-n}, e_n>
    cplx b_neg_n = 0.0;  // <K V e_n, e_{-n}>
    int terms_used = 0;
    FourierSeq KVe_plus;   // K V e_n
    FourierSeq KVe_minus;  // K V e_{-n}
};

Coefficients coefficients(const ReductionContext& ctx, index_t n, cplx lambda);
Coefficients coefficients_offset(const ReductionContext& ctx, index_t n, cplx delta);

// det B_n(lambda) = (delta - a_n)(delta - a_{-n}) - b_n b_{-n}
cplx det_B_offset(const ReductionContext& ctx, index_t n, cplx delta);

struct TNormSample {
    double max_ratio = 0.0;  // "sample estimate" of ||T_n||_{w,s,infty;+-n}
    double ratio_plus = 0.0;
    double ratio_minus = 0.0;
    int probes = 0;
};

// Probe set: unit masses at 64 indices, 16 random sequences, plus extra.
TNormSample sample_T_norm(const ReductionContext& ctx, index_t n, cplx delta,
                          const std::vector<FourierSeq>& extra = {}, std::uint64_t seed = 7);

// Shifted-norm ratio of T_n on every probe individually (for certification).
std::vector<double> contraction_ratios(const ReductionContext& ctx, index_t n, cplx delta,
                                       const std::vector<FourierSeq>& probes);
std::vector<FourierSeq> random_probes(const ReductionContext& ctx, index_t n, int count, std::uint64_t seed);

// ---------------------------------------------------------------- roots

struct AlphaResult {
    cplx alpha = 0.0;  // lambda value
    cplx delta = 0.0;  // alpha - n^2 pi^2
    double residual = 0.0;
    int iterations = 0;
};

// Iterates delta <- a_n(delta) from 0.  Requires n >= N_ms.
AlphaResult alpha_fixed_point(const ReductionContext& ctx, index_t n);
// Same iteration without the threshold precondition.
AlphaResult alpha_iterate(const ReductionContext& ctx, index_t n);

struct RootResult {
    cplx xi1 = 0.0, xi2 = 0.0;        // lambda values, lexicographic
    cplx delta1 = 0.0, delta2 = 0.0;  // offsets
    double residual = 0.0;            // max |det B_n| at the roots
    bool degenerate = false;
    bool used_fallback = false;
    int winding = 2;
    int newton_steps = 0;
    AlphaResult alpha{};
    double xi_bound = 0.0;  // sqrt(6) sup_{D_n grid} |b_n b_{-n}|^{1/2}
    bool xi_bound_ok = true;
    cplx gap() const { return degenerate ? cplx(0.0) : delta2 - delta1; }
};

RootResult find_roots(const ReductionContext& ctx, index_t n);

// Zero count of det B_n inside D_n by the argument principle (points on the circle).
int winding_number(const ReductionContext& ctx, index_t n, int points = 256);

// ---------------------------------------------------------------- adapted map

struct AdaptedResult {
    FourierSeq r;        // r_{2n}, ready to compare with q.seq
    index_t M = 0;
    index_t n_max = 0;
    std::vector<AlphaResult> alphas;  // for n = M..n_max
};

// n_max <= 0 picks max(M_ms, band of q) + 4.  Beyond n_max r copies q.
AdaptedResult adapted_coefficients(const ReductionContext& ctx, index_t n_max = 0);

struct SandwichReport {
    index_t n = 0;
    bool condition_met = false;
    bool degenerate = false;
    double lo = 0.0, mid = 0.0, hi = 0.0;
    bool pass = true;
    std::string status;
};

SandwichReport gap_sandwich(const ReductionContext& ctx, index_t n, const FourierSeq& r, cplx gamma_n);

struct EigenfunctionResult {
    FourierSeq f;
    double residual = 0.0;       // ||(L - xi) f|| / ||f|| in the (s-2) weighted sup norm
    double regularity = 0.0;     // sup_k <k>^{s+2} |f_k - u_k|
    double kernel_residual = 0.0;
};

EigenfunctionResult eigenfunction_reconstruct(const ReductionContext& ctx, index_t n, cplx xi,
                                              std::pair<cplx, cplx> u);

// Kernel vector of B_n at xi (normalized, max component 1 in modulus).
std::pair<cplx, cplx> kernel_vector(const ReductionContext& ctx, index_t n, cplx xi);

struct ReductionResult {
    index_t n = 0;
    cplx a_n = 0.0, b_n = 0.0, b_neg_n = 0.0;  // at alpha_n
    cplx alpha_n = 0.0;
    cplx xi_1 = 0.0, xi_2 = 0.0;
    double gap_estimate = 0.0;
    int neumann_terms_used = 0;
    double contraction_bound = 0.0;
    bool below_threshold = false;
};

ReductionResult reduce(const ReductionContext& ctx, index_t n);

}  // namespace hillspec
