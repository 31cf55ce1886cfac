#pragma once

#include <vector>

#include "hillspec/hill_operator.hpp"

namespace hillspec {

// Coordinates z_n for 1 <= |n| <= count.  z_0 is not stored.
class BirkhoffState {
public:
    BirkhoffState() = default;
    explicit BirkhoffState(index_t count);

    index_t count() const { return static_cast<index_t>(pos_.size()); }
    cplx z(index_t n) const;
    void set(index_t n, cplx v);

    // I_n = z_n z_{-n}; real and nonnegative for real states
    cplx action(index_t n) const { return z(n) * z(-n); }
    std::vector<cplx> actions() const;
    // z_{-n} = conj(z_n) within tol
    bool is_real(double tol = 0.0) const;
    // sup_n <n>^s |z_n|
    double norm(double s) const;

private:
    std::vector<cplx> pos_, neg_;
};

struct ActionReport {
    std::vector<double> I;  // I_n, n = 1..size
    bool asymptotic = true;
};

// I_n = gamma_n^2 / (8 n pi).  Gaps with |Im| > tol max(1, |gamma|) are rejected.
ActionReport actions_from_gaps(const std::vector<cplx>& gamma, double tol = 1e-10);

struct FrequencyReport {
    std::vector<double> omega;  // omega_n, n = 1..size
    bool asymptotic = true;
};

// omega_n = (2 n pi)^3 - 6 I_n
FrequencyReport frequencies(const std::vector<double>& I);

// Weighted Fourier transform: z_n = q_{2n} / sqrt(2 pi max(|n|, 1)).
BirkhoffState linearized_birkhoff(const Potential& q);
Potential inverse_linearized_birkhoff(const BirkhoffState& z, index_t half_range = 0);

// z_n -> e^{i omega_n t} z_n, z_{-n} -> e^{-i omega_n t} z_{-n}, with omega_n
// from the state's own actions.
BirkhoffState flow(const BirkhoffState& z, double t);

// e^{i omega t} with omega t reduced mod 2 pi in double-double precision.
cplx unit_phase(double omega, double t);

bool torus_membership(const BirkhoffState& ref, const BirkhoffState& test, double tol);

// z^{(m)}: z with the pair z_{+-nu_m} negated.
std::vector<BirkhoffState> sign_flip_family(const BirkhoffState& z, const std::vector<index_t>& nus);

}  // namespace hillspec
