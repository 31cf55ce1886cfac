#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hillspec/errors.hpp"

namespace hillspec {

using cplx = std::complex<double>;
using index_t = std::int64_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// <n> = 1 + |n|
inline double bracket(index_t n) { return 1.0 + static_cast<double>(n < 0 ? -n : n); }

// Weight w_n = min(<n>^a, exp(eps |n|)).  a = 0 and eps = inf is the trivial weight.
class Weight {
public:
    Weight() = default;

    static Weight trivial() { return Weight{}; }
    static Weight polynomial(double a);

    double operator()(index_t n) const;

    double exponent() const { return a_; }
    double cap() const { return eps_; }
    bool is_trivial() const { return a_ == 0.0; }
    std::string describe() const;

    friend Weight cap_weight(const Weight& w, double eps);

private:
    double a_ = 0.0;
    double eps_ = kInf;
};

// Throws InvalidWeight if any invariant fails on |n|, |m| <= range.
void check_weight(const Weight& w, index_t range = 512);

// w^eps_n = min(w_n, e^{eps|n|}); the result is validated by sampling.
Weight cap_weight(const Weight& w, double eps);

// Smallest n >= 1 with e^{eps n} >= w_n, scanning up to limit; -1 if none.
index_t cap_crossover(const Weight& w, double eps, index_t limit = 1 << 24);

struct SeqFlags {
    bool real = false;
    bool zero_mean = false;
    bool one_periodic = false;
};

// Sparse doubly indexed coefficient sequence on Z with half range K.
// Entries are kept sorted by index; absent indices are zero.
class FourierSeq {
public:
    FourierSeq() = default;
    explicit FourierSeq(index_t half_range, SeqFlags flags = {});

    // Build from (index, value) pairs; duplicates are summed.
    static FourierSeq from_pairs(index_t half_range, std::vector<std::pair<index_t, cplx>> entries,
                                 SeqFlags flags = {});
    static FourierSeq unit(index_t half_range, index_t k, cplx value = 1.0);

    index_t half_range() const { return K_; }
    const SeqFlags& flags() const { return flags_; }
    bool is_real() const { return flags_.real; }
    bool is_zero_mean() const { return flags_.zero_mean; }
    bool is_one_periodic() const { return flags_.one_periodic; }
    void set_flags(SeqFlags f);

    cplx operator[](index_t k) const;
    void set(index_t k, cplx v);
    void add(index_t k, cplx v);

    std::size_t nnz() const { return idx_.size(); }
    const std::vector<index_t>& indices() const { return idx_; }
    const std::vector<cplx>& values() const { return val_; }
    bool empty() const { return idx_.empty(); }
    index_t min_index() const { return idx_.empty() ? 0 : idx_.front(); }
    index_t max_index() const { return idx_.empty() ? 0 : idx_.back(); }
    double max_abs() const;

    // Throws InvalidSequence if a flagged invariant is broken.
    void validate(double real_tol = 1e-12) const;

    FourierSeq scaled(cplx c) const;
    FourierSeq conj_reflect() const;  // k -> conj(f_{-k})
    FourierSeq truncated(index_t half_range) const;
    // Drops entries with |f_k| <= thresh.
    void prune(double thresh);

    friend FourierSeq operator+(const FourierSeq& a, const FourierSeq& b);
    friend FourierSeq operator-(const FourierSeq& a, const FourierSeq& b);

    // Entries with exactly equal values (index and bits).
    bool same_entries(const FourierSeq& other) const;

private:
    index_t K_ = 0;
    SeqFlags flags_{};
    std::vector<index_t> idx_;
    std::vector<cplx> val_;

    friend class SeqAccumulator;
};

// Dense-or-hash scratch buffer used to assemble sums of many terms.
class SeqAccumulator {
public:
    SeqAccumulator(index_t lo, index_t hi);
    void add(index_t k, cplx v);
    FourierSeq finish(index_t half_range, SeqFlags flags) const;

private:
    index_t lo_, hi_;
    bool dense_;
    std::vector<cplx> dense_buf_;
    std::vector<unsigned char> touched_;
    std::map<index_t, cplx> sparse_;
};

double norm(const FourierSeq& f, const Weight& w, double s, double p);
inline double sup_norm(const FourierSeq& f, const Weight& w, double s) { return norm(f, w, s, kInf); }

// sup_k w_{k+l} <k+l>^s |f_k|
double shifted_norm(const FourierSeq& f, const Weight& w, double s, index_t l);

FourierSeq tail(const FourierSeq& f, index_t N);

// (a*b)_n = sum_m a_{n-m} b_m, truncated to max(K_a, K_b).  Each output entry
// accumulates its terms in ascending m.
FourierSeq convolve(const FourierSeq& a, const FourierSeq& b);

// Same, but the output keeps only |n| <= out_half_range.
FourierSeq convolve(const FourierSeq& a, const FourierSeq& b, index_t out_half_range);

// sum_{|m| != n} |m^2 - n^2|^{-sigma}
double hilbert_sum(index_t n, double sigma, index_t cutoff = 1000000);

// The n-dependence of the hilbert_sum bound in the regime of sigma.
double hilbert_rate(index_t n, double sigma);

// Large-n constant of hilbert_sum / n^{1-2 sigma} for 1/2 < sigma < 1.
double hilbert_asymptotic_constant(double sigma);

// max over ns of hilbert_sum(n, sigma) / hilbert_rate(n, sigma)
double fit_hilbert_constant(double sigma, const std::vector<index_t>& ns);

struct WeakStarReport {
    bool converged = false;
    bool bounded = false;
    bool componentwise = false;
    double norm_bound = 0.0;         // sup of the norms over the list
    double early_norm_bound = 0.0;   // sup over the first two thirds
    double max_component_error = 0.0;
    index_t worst_index = 0;
    index_t window = 0;              // components checked: |k| <= window
};

// Boundedness: the final third of the list may not exceed the earlier sup by
// more than growth_tol (relative).  Componentwise: indices |k| <= window, with
// window defaulting to the largest index used by the limit or the first two
// thirds of the list, must be within component_tol over the final third.
WeakStarReport weakstar_converged(const std::vector<FourierSeq>& seq, const FourierSeq& limit, double s,
                                  double component_tol, double growth_tol = 0.1, index_t window = -1);

}  // namespace hillspec
