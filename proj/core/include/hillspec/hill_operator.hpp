#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hillspec/sequence_spaces.hpp"

namespace hillspec {

inline constexpr double kPi = 3.14159265358979323846;

// Mode symbol of -d^2/dx^2 on e_k(x) = exp(i pi k x).
inline double mode_symbol(index_t k) {
    const double kp = static_cast<double>(k) * kPi;
    return kp * kp;
}

// A 1-periodic zero-mean potential viewed on R/2Z: only even indices 2j carry
// coefficients, q_0 = 0.
struct Potential {
    FourierSeq seq;
    double s = 0.0;
    Weight w{};

    Potential() : seq(0, SeqFlags{false, true, true}) {}
    explicit Potential(FourierSeq coeffs, double s_label = 0.0, Weight weight = {});

    bool is_real() const { return seq.is_real(); }
    // Largest j with q_{2j} != 0.
    index_t band() const;
    cplx operator[](index_t k) const { return seq[k]; }
    double norm_ws() const { return sup_norm(seq, w, s); }
};

enum class BoundaryCondition { per_plus, per_minus, dirichlet };

// --- potential builders

Potential zero_potential(index_t half_range = 2);

// q_{2} = q_{-2} = c, i.e. q = 2c cos(2 pi x) for real c.
Potential single_mode(cplx c);

// Coefficients q_{2j} given for j >= 1; real potentials fill q_{-2j} = conj(q_{2j}).
Potential real_potential(const std::map<index_t, cplx>& q2j_positive, double s = 0.0, Weight w = {});

// Arbitrary complex potential from q_{2j}, j != 0.
Potential complex_potential(const std::map<index_t, cplx>& q2j, double s = 0.0, Weight w = {});

// |q_{2j}| = amp * <j>^{expo} for 1 <= j <= jmax with uniform random phases
// (cos_type: all phases zero, so q is even).  Real by construction.
Potential power_law_potential(double amp, double expo, index_t jmax, std::uint64_t seed, bool cos_type = false,
                              double s = 0.0, Weight w = {});

// --- operator pieces

FourierSeq multiply(const Potential& q, const FourierSeq& f);
FourierSeq multiply(const Potential& q, const FourierSeq& f, index_t out_half_range);

// g_k = f_k / (lambda - (k pi)^2) for |k| != n, g_{+-n} = 0.  lambda must lie in
// the strip |Re lambda - n^2 pi^2| <= 12 n.
FourierSeq apply_A_inv_Q(cplx lambda, index_t n, const FourierSeq& f);

// Same map with lambda = n^2 pi^2 + delta; divisors are delta + (n^2 - k^2) pi^2
// formed from the exact integer n^2 - k^2.
FourierSeq apply_A_inv_Q_offset(index_t n, cplx delta, const FourierSeq& f);

void check_strip(index_t n, cplx delta);

enum class Projection { P, Q };
FourierSeq project(index_t n, const FourierSeq& f, Projection which);

// q^cos_k for |k| <= 2K, stored at position k + 2K.
struct CosCoeffs {
    index_t K2 = 0;
    std::vector<cplx> v;
    cplx operator()(index_t k) const { return v[static_cast<std::size_t>(k + K2)]; }
};

// q^cos_k = <q, cos(k pi x)> for even k and <q, cos(k pi x) - cos(pi x)> for
// odd k, pairings taken over one period [0,1] of q.
CosCoeffs dirichlet_cos_coeffs(const Potential& q, index_t K);

}  // namespace hillspec
