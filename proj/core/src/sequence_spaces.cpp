#include "hillspec/sequence_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hillspec {

// ---------------------------------------------------------------- Weight

Weight Weight::polynomial(double a) {
    if (!(a >= 0.0) || !std::isfinite(a))
        throw InvalidWeight("polynomial weight needs a finite exponent a >= 0, got " + std::to_string(a));
    Weight w;
    w.a_ = a;
    return w;
}

double Weight::operator()(index_t n) const {
    if (a_ == 0.0) return 1.0;
    const double poly = std::pow(bracket(n), a_);
    if (eps_ == kInf) return poly;
    const double an = static_cast<double>(n < 0 ? -n : n);
    return std::min(poly, std::exp(eps_ * an));
}

std::string Weight::describe() const {
    if (a_ == 0.0) return "trivial";
    std::ostringstream os;
    os.precision(17);
    os << "poly:a=" << a_;
    if (eps_ != kInf) os << ",cap=" << eps_;
    return os.str();
}

void check_weight(const Weight& w, index_t range) {
    // table of w_k for 0 <= k <= 2*range
    std::vector<double> tab(static_cast<std::size_t>(2 * range + 1));
    for (index_t k = 0; k <= 2 * range; ++k) {
        const double v = w(k);
        if (!(v >= 1.0)) throw InvalidWeight("weight below 1 at n=" + std::to_string(k));
        if (w(-k) != v) throw InvalidWeight("weight not symmetric at n=" + std::to_string(k));
        if (k > 0 && v < tab[k - 1]) throw InvalidWeight("weight not monotone at n=" + std::to_string(k));
        tab[k] = v;
    }
    if (w(0) != 1.0) throw InvalidWeight("weight not normalized, w_0 != 1");
    const double rel = 1e-12;
    for (index_t n = -range; n <= range; ++n) {
        const double wn = tab[std::abs(n)];
        for (index_t m = -range; m <= range; ++m) {
            const double lhs = tab[std::abs(n + m)];
            const double rhs = wn * tab[std::abs(m)];
            if (lhs > rhs * (1.0 + rel))
                throw InvalidWeight("weight not submultiplicative at n=" + std::to_string(n) +
                                    ", m=" + std::to_string(m));
        }
    }
}

Weight cap_weight(const Weight& w, double eps) {
    if (!(eps > 0.0)) throw InvalidWeight("cap parameter must be positive");
    Weight out = w;
    out.eps_ = std::min(w.eps_, eps);
    if (out.a_ == 0.0) out.eps_ = kInf;  // min(1, e^{eps|n|}) = 1
    check_weight(out);
    return out;
}

index_t cap_crossover(const Weight& w, double eps, index_t limit) {
    for (index_t n = 1; n <= limit; ++n)
        if (std::exp(eps * static_cast<double>(n)) >= w(n)) return n;
    return -1;
}

// ---------------------------------------------------------------- FourierSeq

FourierSeq::FourierSeq(index_t half_range, SeqFlags flags) : K_(half_range), flags_(flags) {
    if (half_range < 0) throw InvalidSequence("half range must be nonnegative");
}

FourierSeq FourierSeq::from_pairs(index_t half_range, std::vector<std::pair<index_t, cplx>> entries,
                                  SeqFlags flags) {
    FourierSeq f(half_range, flags);
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < entries.size();) {
        const index_t k = entries[i].first;
        if (k > half_range || k < -half_range)
            throw InvalidSequence("index " + std::to_string(k) + " outside half range " +
                                  std::to_string(half_range));
        cplx v = 0.0;
        for (; i < entries.size() && entries[i].first == k; ++i) v += entries[i].second;
        if (v != cplx(0.0)) {
            f.idx_.push_back(k);
            f.val_.push_back(v);
        }
    }
    return f;
}

FourierSeq FourierSeq::unit(index_t half_range, index_t k, cplx value) {
    return from_pairs(half_range, {{k, value}});
}

void FourierSeq::set_flags(SeqFlags f) { flags_ = f; }

cplx FourierSeq::operator[](index_t k) const {
    auto it = std::lower_bound(idx_.begin(), idx_.end(), k);
    if (it == idx_.end() || *it != k) return 0.0;
    return val_[static_cast<std::size_t>(it - idx_.begin())];
}

void FourierSeq::set(index_t k, cplx v) {
    if (k > K_ || k < -K_)
        throw InvalidSequence("index " + std::to_string(k) + " outside half range " + std::to_string(K_));
    auto it = std::lower_bound(idx_.begin(), idx_.end(), k);
    const auto pos = it - idx_.begin();
    if (it != idx_.end() && *it == k) {
        if (v == cplx(0.0)) {
            idx_.erase(it);
            val_.erase(val_.begin() + pos);
        } else {
            val_[static_cast<std::size_t>(pos)] = v;
        }
    } else if (v != cplx(0.0)) {
        idx_.insert(it, k);
        val_.insert(val_.begin() + pos, v);
    }
}

void FourierSeq::add(index_t k, cplx v) { set(k, (*this)[k] + v); }

double FourierSeq::max_abs() const {
    double m = 0.0;
    for (const auto& v : val_) m = std::max(m, std::abs(v));
    return m;
}

void FourierSeq::validate(double real_tol) const {
    for (std::size_t i = 0; i < idx_.size(); ++i) {
        const index_t k = idx_[i];
        if (k > K_ || k < -K_) throw InvalidSequence("entry beyond half range at k=" + std::to_string(k));
        if (flags_.zero_mean && k == 0) throw InvalidSequence("zero-mean sequence has f_0 != 0");
        if (flags_.one_periodic && (k % 2 != 0))
            throw InvalidSequence("1-periodic sequence has odd entry at k=" + std::to_string(k));
        if (flags_.real) {
            const cplx partner = (*this)[-k];
            const double scale = std::max(1.0, std::abs(val_[i]));
            if (std::abs(partner - std::conj(val_[i])) > real_tol * scale)
                throw InvalidSequence("real sequence violates f_{-k} = conj(f_k) at k=" + std::to_string(k));
        }
    }
}

FourierSeq FourierSeq::scaled(cplx c) const {
    FourierSeq out(K_, flags_);
    if (c == cplx(0.0)) return out;
    out.idx_ = idx_;
    out.val_.reserve(val_.size());
    for (const auto& v : val_) out.val_.push_back(c * v);
    if (c.imag() != 0.0) out.flags_.real = false;
    return out;
}

FourierSeq FourierSeq::conj_reflect() const {
    FourierSeq out(K_, flags_);
    out.idx_.resize(idx_.size());
    out.val_.resize(val_.size());
    const std::size_t n = idx_.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.idx_[n - 1 - i] = -idx_[i];
        out.val_[n - 1 - i] = std::conj(val_[i]);
    }
    return out;
}

FourierSeq FourierSeq::truncated(index_t half_range) const {
    FourierSeq out(half_range, flags_);
    for (std::size_t i = 0; i < idx_.size(); ++i) {
        if (idx_[i] < -half_range || idx_[i] > half_range) continue;
        out.idx_.push_back(idx_[i]);
        out.val_.push_back(val_[i]);
    }
    return out;
}

void FourierSeq::prune(double thresh) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < idx_.size(); ++i) {
        if (std::abs(val_[i]) <= thresh) continue;
        idx_[j] = idx_[i];
        val_[j] = val_[i];
        ++j;
    }
    idx_.resize(j);
    val_.resize(j);
}

namespace {

FourierSeq combine(const FourierSeq& a, const FourierSeq& b, double sign) {
    std::vector<std::pair<index_t, cplx>> e;
    e.reserve(a.nnz() + b.nnz());
    for (std::size_t i = 0; i < a.nnz(); ++i) e.emplace_back(a.indices()[i], a.values()[i]);
    for (std::size_t i = 0; i < b.nnz(); ++i) e.emplace_back(b.indices()[i], sign * b.values()[i]);
    SeqFlags fl;
    fl.real = a.is_real() && b.is_real();
    fl.zero_mean = a.is_zero_mean() && b.is_zero_mean();
    fl.one_periodic = a.is_one_periodic() && b.is_one_periodic();
    return FourierSeq::from_pairs(std::max(a.half_range(), b.half_range()), std::move(e), fl);
}

}  // namespace

FourierSeq operator+(const FourierSeq& a, const FourierSeq& b) { return combine(a, b, 1.0); }
FourierSeq operator-(const FourierSeq& a, const FourierSeq& b) { return combine(a, b, -1.0); }

bool FourierSeq::same_entries(const FourierSeq& other) const {
    return idx_ == other.idx_ && val_ == other.val_;
}

// ---------------------------------------------------------------- accumulator

SeqAccumulator::SeqAccumulator(index_t lo, index_t hi) : lo_(lo), hi_(hi) {
    dense_ = hi >= lo && (hi - lo) < (index_t{1} << 21);
    if (dense_) {
        dense_buf_.assign(static_cast<std::size_t>(hi - lo + 1), cplx(0.0));
        touched_.assign(dense_buf_.size(), 0);
    }
}

void SeqAccumulator::add(index_t k, cplx v) {
    if (dense_) {
        const auto i = static_cast<std::size_t>(k - lo_);
        dense_buf_[i] += v;
        touched_[i] = 1;
    } else {
        sparse_[k] += v;
    }
}

FourierSeq SeqAccumulator::finish(index_t half_range, SeqFlags flags) const {
    FourierSeq out(half_range, flags);
    auto push = [&](index_t k, cplx v) {
        if (k < -half_range || k > half_range || v == cplx(0.0)) return;
        out.idx_.push_back(k);
        out.val_.push_back(v);
    };
    if (dense_) {
        for (std::size_t i = 0; i < dense_buf_.size(); ++i)
            if (touched_[i]) push(lo_ + static_cast<index_t>(i), dense_buf_[i]);
    } else {
        for (const auto& [k, v] : sparse_) push(k, v);
    }
    return out;
}

// ---------------------------------------------------------------- norms

double norm(const FourierSeq& f, const Weight& w, double s, double p) {
    if (!(p >= 1.0)) throw InvalidSequence("norm exponent p must be >= 1");
    const auto& idx = f.indices();
    const auto& val = f.values();
    auto term = [&](std::size_t i) { return w(idx[i]) * std::pow(bracket(idx[i]), s) * std::abs(val[i]); };
    if (p == kInf) {
        double m = 0.0;
        for (std::size_t i = 0; i < idx.size(); ++i) m = std::max(m, term(i));
        return m;
    }
    // ascending |k|, +k before -k
    auto zero = std::lower_bound(idx.begin(), idx.end(), index_t{0});
    std::ptrdiff_t pos = zero - idx.begin();   // first index >= 0
    std::ptrdiff_t neg = pos - 1;              // last index < 0
    double acc = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(idx.size());
    while (pos < n || neg >= 0) {
        const index_t kp = pos < n ? idx[pos] : std::numeric_limits<index_t>::max();
        const index_t kn = neg >= 0 ? -idx[neg] : std::numeric_limits<index_t>::max();
        if (kp <= kn) {
            acc += std::pow(term(static_cast<std::size_t>(pos)), p);
            ++pos;
        } else {
            acc += std::pow(term(static_cast<std::size_t>(neg)), p);
            --neg;
        }
    }
    return std::pow(acc, 1.0 / p);
}

double shifted_norm(const FourierSeq& f, const Weight& w, double s, index_t l) {
    double m = 0.0;
    const auto& idx = f.indices();
    const auto& val = f.values();
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const index_t k = idx[i] + l;
        m = std::max(m, w(k) * std::pow(bracket(k), s) * std::abs(val[i]));
    }
    return m;
}

FourierSeq tail(const FourierSeq& f, index_t N) {
    std::vector<std::pair<index_t, cplx>> e;
    for (std::size_t i = 0; i < f.nnz(); ++i)
        if (std::abs(f.indices()[i]) >= N) e.emplace_back(f.indices()[i], f.values()[i]);
    SeqFlags fl = f.flags();
    if (N >= 1) fl.zero_mean = true;
    return FourierSeq::from_pairs(f.half_range(), std::move(e), fl);
}

FourierSeq convolve(const FourierSeq& a, const FourierSeq& b) {
    return convolve(a, b, std::max(a.half_range(), b.half_range()));
}

FourierSeq convolve(const FourierSeq& a, const FourierSeq& b, index_t out_half_range) {
    SeqFlags fl;
    fl.real = a.is_real() && b.is_real();
    fl.one_periodic = a.is_one_periodic() && b.is_one_periodic();
    if (a.empty() || b.empty()) return FourierSeq(out_half_range, fl);
    const index_t lo = std::max(a.min_index() + b.min_index(), -out_half_range);
    const index_t hi = std::min(a.max_index() + b.max_index(), out_half_range);
    if (lo > hi) return FourierSeq(out_half_range, fl);
    SeqAccumulator acc(lo, hi);
    const auto& ai = a.indices();
    const auto& av = a.values();
    const auto& bi = b.indices();
    const auto& bv = b.values();
    for (std::size_t mb = 0; mb < bi.size(); ++mb) {
        const index_t m = bi[mb];
        const cplx bm = bv[mb];
        // a_j contributes at n = j + m; restrict j to [lo - m, hi - m]
        auto first = std::lower_bound(ai.begin(), ai.end(), lo - m);
        for (auto it = first; it != ai.end() && *it + m <= hi; ++it) {
            const auto j = static_cast<std::size_t>(it - ai.begin());
            acc.add(*it + m, av[j] * bm);
        }
    }
    return acc.finish(out_half_range, fl);
}

// ---------------------------------------------------------------- hilbert sum

double hilbert_sum(index_t n, double sigma, index_t cutoff) {
    if (!(sigma > 0.5)) throw DivergentSum("hilbert_sum diverges for sigma <= 1/2");
    if (n < 1) throw DivergentSum("hilbert_sum needs n >= 1");
    const index_t M = std::max(cutoff, 64 * n);
    const double nn = static_cast<double>(n);
    auto f = [&](index_t m) {
        const double md = static_cast<double>(m);
        return std::exp(-sigma * std::log(std::abs((md - nn) * (md + nn))));
    };
    // smallest terms first
    double acc = 0.0;
    for (index_t m = M; m >= 1; --m)
        if (m != n) acc += f(m);
    // m > M: midpoint-rule integral plus f'(X)/24
    const double X = static_cast<double>(M) + 0.5;
    const double u = (nn / X) * (nn / X);
    double coef = 1.0, tail_int = 0.0, upow = 1.0;
    for (int j = 0; j < 60; ++j) {
        const double term = coef * upow * std::pow(X, 1.0 - 2.0 * sigma) / (2.0 * sigma + 2.0 * j - 1.0);
        tail_int += term;
        if (std::abs(term) < 1e-18 * std::abs(tail_int)) break;
        coef *= (sigma + j) / (j + 1.0);
        upow *= u;
    }
    tail_int -= sigma / 12.0 * std::pow(X, -2.0 * sigma - 1.0);
    return f(0) + 2.0 * (acc + tail_int);
}

double hilbert_rate(index_t n, double sigma) {
    const double nn = static_cast<double>(n);
    if (sigma < 1.0) return std::pow(nn, 1.0 - 2.0 * sigma);
    if (sigma == 1.0) return std::log(bracket(n)) / nn;
    return std::pow(nn, -sigma);
}

double hilbert_asymptotic_constant(double sigma) {
    if (!(sigma > 0.5 && sigma < 1.0)) throw DivergentSum("asymptotic constant needs 1/2 < sigma < 1");
    return std::beta(0.5, 1.0 - sigma) + std::beta(sigma - 0.5, 1.0 - sigma);
}

double fit_hilbert_constant(double sigma, const std::vector<index_t>& ns) {
    double c = 0.0;
    for (index_t n : ns) c = std::max(c, hilbert_sum(n, sigma) / hilbert_rate(n, sigma));
    return c;
}

// ---------------------------------------------------------------- weak* convergence

WeakStarReport weakstar_converged(const std::vector<FourierSeq>& seq, const FourierSeq& limit, double s,
                                  double component_tol, double growth_tol, index_t window) {
    WeakStarReport r;
    if (seq.empty()) return r;
    const Weight w1;
    const std::size_t L = seq.size();
    const std::size_t split = L - std::max<std::size_t>(1, L / 3);  // final third starts here
    double early = 0.0, late = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
        const double v = sup_norm(seq[i], w1, s);
        (i < split ? early : late) = std::max(i < split ? early : late, v);
    }
    r.early_norm_bound = split > 0 ? early : late;
    r.norm_bound = std::max(early, late);
    r.bounded = std::isfinite(r.norm_bound) && (split == 0 || late <= (1.0 + growth_tol) * early);

    if (window < 0) {
        window = 0;
        auto widen = [&](const FourierSeq& f) {
            if (!f.empty()) window = std::max({window, std::abs(f.min_index()), std::abs(f.max_index())});
        };
        widen(limit);
        for (std::size_t i = 0; i < split; ++i) widen(seq[i]);
    }
    r.window = window;
    for (std::size_t i = split; i < L; ++i) {
        const FourierSeq d = seq[i] - limit;
        for (std::size_t e = 0; e < d.nnz(); ++e) {
            const index_t k = d.indices()[e];
            if (std::abs(k) > window) continue;
            const double err = std::abs(d.values()[e]);
            if (err > r.max_component_error) {
                r.max_component_error = err;
                r.worst_index = k;
            }
        }
    }
    r.componentwise = r.max_component_error <= component_tol;
    r.converged = r.bounded && r.componentwise;
    return r;
}

}  // namespace hillspec
