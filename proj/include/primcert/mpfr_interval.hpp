#pragma once

// Software extended-precision interval arithmetic for escalation.
//
// BigInterval keeps [lo, hi] as MPFR numbers and applies directed rounding
// (RNDD / RNDU) at every operation, so enclosures are certified at the
// selected precision. escalate() re-runs a computation expressed against a
// generic arithmetic context at 128 or 256 fractional bits; refine()
// intersects the result back into a hardware interval.

#include <mpfr.h>

#include <stdexcept>
#include <utility>

#include "primcert/interval.hpp"

namespace primcert {

inline int validate_escalate_bits(int bits) {
    if (bits != 128 && bits != 256)
        throw std::invalid_argument("escalate bits must be 128 or 256");
    return bits;
}

// Desk-scale magnitudes stay below 2^63, so a 64-bit integer-part guard on
// top of the requested fractional bits keeps ulp <= 2^-bits everywhere.
inline mpfr_prec_t prec_for_bits(int bits) {
    return static_cast<mpfr_prec_t>(validate_escalate_bits(bits) + 64);
}

class BigInterval {
  public:
    explicit BigInterval(mpfr_prec_t prec) : prec_(prec) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }

    BigInterval(const BigInterval& o) : BigInterval(o.prec_) {
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }

    BigInterval(BigInterval&& o) noexcept : prec_(o.prec_) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }

    BigInterval& operator=(BigInterval o) noexcept {
        std::swap(prec_, o.prec_);
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
        return *this;
    }

    ~BigInterval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    static BigInterval from_double(double x, mpfr_prec_t prec) {
        BigInterval r(prec);
        mpfr_set_d(r.lo_, x, MPFR_RNDD);
        mpfr_set_d(r.hi_, x, MPFR_RNDU);
        return r;
    }

    static BigInterval from_interval(const Interval& iv, mpfr_prec_t prec) {
        BigInterval r(prec);
        mpfr_set_d(r.lo_, iv.lo, MPFR_RNDD);
        mpfr_set_d(r.hi_, iv.hi, MPFR_RNDU);
        return r;
    }

    static BigInterval from_u64(u64 v, mpfr_prec_t prec) {
        BigInterval r(prec);
        mpfr_set_uj(r.lo_, v, MPFR_RNDD);
        mpfr_set_uj(r.hi_, v, MPFR_RNDU);
        return r;
    }

    mpfr_prec_t prec() const { return prec_; }
    const mpfr_t& lo() const { return lo_; }
    const mpfr_t& hi() const { return hi_; }
    mpfr_t& lo() { return lo_; }
    mpfr_t& hi() { return hi_; }

    // Directed conversion; MPFR rounds exactly, so no extra widening.
    Interval to_interval() const {
        return Interval{mpfr_get_d(lo_, MPFR_RNDD), mpfr_get_d(hi_, MPFR_RNDU)};
    }

    // hi - lo rounded up, as a double (may underflow double range to 0+).
    double width_upper() const {
        mpfr_t w;
        mpfr_init2(w, prec_);
        mpfr_sub(w, hi_, lo_, MPFR_RNDU);
        const double d = mpfr_get_d(w, MPFR_RNDU);
        mpfr_clear(w);
        return d;
    }

    bool is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }

  private:
    mpfr_prec_t prec_;
    mpfr_t lo_;
    mpfr_t hi_;
};

inline BigInterval big_add(const BigInterval& a, const BigInterval& b) {
    BigInterval r(a.prec());
    mpfr_add(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_add(r.hi(), a.hi(), b.hi(), MPFR_RNDU);
    return r;
}

inline BigInterval big_sub(const BigInterval& a, const BigInterval& b) {
    BigInterval r(a.prec());
    mpfr_sub(r.lo(), a.lo(), b.hi(), MPFR_RNDD);
    mpfr_sub(r.hi(), a.hi(), b.lo(), MPFR_RNDU);
    return r;
}

inline BigInterval big_mul(const BigInterval& a, const BigInterval& b) {
    BigInterval r(a.prec());
    mpfr_t t;
    mpfr_init2(t, a.prec());
    // min over the four endpoint products, each rounded down.
    mpfr_mul(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_mul(t, a.lo(), b.hi(), MPFR_RNDD);
    mpfr_min(r.lo(), r.lo(), t, MPFR_RNDD);
    mpfr_mul(t, a.hi(), b.lo(), MPFR_RNDD);
    mpfr_min(r.lo(), r.lo(), t, MPFR_RNDD);
    mpfr_mul(t, a.hi(), b.hi(), MPFR_RNDD);
    mpfr_min(r.lo(), r.lo(), t, MPFR_RNDD);
    // max over the same products, rounded up.
    mpfr_mul(r.hi(), a.lo(), b.lo(), MPFR_RNDU);
    mpfr_mul(t, a.lo(), b.hi(), MPFR_RNDU);
    mpfr_max(r.hi(), r.hi(), t, MPFR_RNDU);
    mpfr_mul(t, a.hi(), b.lo(), MPFR_RNDU);
    mpfr_max(r.hi(), r.hi(), t, MPFR_RNDU);
    mpfr_mul(t, a.hi(), b.hi(), MPFR_RNDU);
    mpfr_max(r.hi(), r.hi(), t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

inline BigInterval big_div(const BigInterval& a, const BigInterval& b) {
    if (mpfr_sgn(b.lo()) <= 0 && mpfr_sgn(b.hi()) >= 0)
        throw std::domain_error("big_div: divisor interval contains zero");
    BigInterval r(a.prec());
    mpfr_t t;
    mpfr_init2(t, a.prec());
    mpfr_div(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_div(t, a.lo(), b.hi(), MPFR_RNDD);
    mpfr_min(r.lo(), r.lo(), t, MPFR_RNDD);
    mpfr_div(t, a.hi(), b.lo(), MPFR_RNDD);
    mpfr_min(r.lo(), r.lo(), t, MPFR_RNDD);
    mpfr_div(t, a.hi(), b.hi(), MPFR_RNDD);
    mpfr_min(r.lo(), r.lo(), t, MPFR_RNDD);
    mpfr_div(r.hi(), a.lo(), b.lo(), MPFR_RNDU);
    mpfr_div(t, a.lo(), b.hi(), MPFR_RNDU);
    mpfr_max(r.hi(), r.hi(), t, MPFR_RNDU);
    mpfr_div(t, a.hi(), b.lo(), MPFR_RNDU);
    mpfr_max(r.hi(), r.hi(), t, MPFR_RNDU);
    mpfr_div(t, a.hi(), b.hi(), MPFR_RNDU);
    mpfr_max(r.hi(), r.hi(), t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

inline BigInterval big_log(const BigInterval& a) {
    if (mpfr_sgn(a.lo()) <= 0) throw std::domain_error("big_log: requires lo > 0");
    BigInterval r(a.prec());
    mpfr_log(r.lo(), a.lo(), MPFR_RNDD);
    mpfr_log(r.hi(), a.hi(), MPFR_RNDU);
    return r;
}

inline BigInterval big_log1p(const BigInterval& a) {
    if (mpfr_cmp_si(a.lo(), -1) <= 0) throw std::domain_error("big_log1p: requires lo > -1");
    BigInterval r(a.prec());
    mpfr_log1p(r.lo(), a.lo(), MPFR_RNDD);
    mpfr_log1p(r.hi(), a.hi(), MPFR_RNDU);
    return r;
}

inline BigInterval big_exp(const BigInterval& a) {
    BigInterval r(a.prec());
    mpfr_exp(r.lo(), a.lo(), MPFR_RNDD);
    mpfr_exp(r.hi(), a.hi(), MPFR_RNDU);
    return r;
}

inline BigInterval big_sqrt(const BigInterval& a) {
    if (mpfr_sgn(a.lo()) < 0) throw std::domain_error("big_sqrt: requires lo >= 0");
    BigInterval r(a.prec());
    mpfr_sqrt(r.lo(), a.lo(), MPFR_RNDD);
    mpfr_sqrt(r.hi(), a.hi(), MPFR_RNDU);
    return r;
}

inline Verdict strictly_greater(const BigInterval& a, const BigInterval& b) {
    if (mpfr_greater_p(a.lo(), b.hi())) return Verdict::CertifiedTrue;
    if (mpfr_lessequal_p(a.hi(), b.lo())) return Verdict::CertifiedFalse;
    return Verdict::Undecided;
}

// Constants re-derived at escalated precision (the embedded 40-digit double
// enclosures would otherwise cap what escalation can resolve).

inline BigInterval big_euler_gamma(mpfr_prec_t prec) {
    BigInterval r(prec);
    mpfr_const_euler(r.lo(), MPFR_RNDD);
    mpfr_const_euler(r.hi(), MPFR_RNDU);
    return r;
}

inline BigInterval big_e_gamma(mpfr_prec_t prec) {
    BigInterval g = big_euler_gamma(prec);
    BigInterval r(prec);
    mpfr_exp(r.lo(), g.lo(), MPFR_RNDD);
    mpfr_exp(r.hi(), g.hi(), MPFR_RNDU);
    return r;
}

inline BigInterval big_zeta2(mpfr_prec_t prec) {
    BigInterval pi(prec);
    mpfr_const_pi(pi.lo(), MPFR_RNDD);
    mpfr_const_pi(pi.hi(), MPFR_RNDU);
    BigInterval r(prec);
    mpfr_sqr(r.lo(), pi.lo(), MPFR_RNDD);
    mpfr_sqr(r.hi(), pi.hi(), MPFR_RNDU);
    mpfr_div_ui(r.lo(), r.lo(), 6, MPFR_RNDD);
    mpfr_div_ui(r.hi(), r.hi(), 6, MPFR_RNDU);
    return r;
}

inline BigInterval big_e_gamma_over_zeta2(mpfr_prec_t prec) {
    return big_div(big_e_gamma(prec), big_zeta2(prec));
}

// Arithmetic contexts: the same formula template evaluates at hardware
// precision (DoubleCtx) or at escalated precision (BigCtx).

struct DoubleCtx {
    using ivl = Interval;
    ivl point(double x) const { return Interval::point(x); }
    ivl from_u64(u64 v) const { return Interval::from_u64(v); }
    ivl add(const ivl& a, const ivl& b) const { return iv_add(a, b); }
    ivl sub(const ivl& a, const ivl& b) const { return iv_sub(a, b); }
    ivl mul(const ivl& a, const ivl& b) const { return iv_mul(a, b); }
    ivl div(const ivl& a, const ivl& b) const { return iv_div(a, b); }
    ivl log(const ivl& a) const { return iv_log(a); }
    ivl log1p(const ivl& a) const { return iv_log1p(a); }
    ivl exp(const ivl& a) const { return iv_exp(a); }
    ivl sqrt(const ivl& a) const { return iv_sqrt(a); }
};

class BigCtx {
  public:
    using ivl = BigInterval;
    explicit BigCtx(int bits) : prec_(prec_for_bits(bits)) {}

    mpfr_prec_t prec() const { return prec_; }
    ivl point(double x) const { return BigInterval::from_double(x, prec_); }
    ivl from_u64(u64 v) const { return BigInterval::from_u64(v, prec_); }
    ivl add(const ivl& a, const ivl& b) const { return big_add(a, b); }
    ivl sub(const ivl& a, const ivl& b) const { return big_sub(a, b); }
    ivl mul(const ivl& a, const ivl& b) const { return big_mul(a, b); }
    ivl div(const ivl& a, const ivl& b) const { return big_div(a, b); }
    ivl log(const ivl& a) const { return big_log(a); }
    ivl log1p(const ivl& a) const { return big_log1p(a); }
    ivl exp(const ivl& a) const { return big_exp(a); }
    ivl sqrt(const ivl& a) const { return big_sqrt(a); }

  private:
    mpfr_prec_t prec_;
};

// Re-evaluates a quantity at >= `bits` fractional bits. The callable
// receives a BigCtx and returns the recomputed enclosure.
template <class F>
BigInterval escalate(F&& recompute, int bits) {
    BigCtx cx(bits);
    return std::forward<F>(recompute)(cx);
}

// Intersects an escalated enclosure into the hardware one. Both contain the
// exact value, so the intersection does too and is never wider than either.
inline Interval refine(const Interval& hw, const BigInterval& big) {
    const Interval b = big.to_interval();
    const double lo = std::fmax(hw.lo, b.lo);
    const double hi = std::fmin(hw.hi, b.hi);
    if (lo > hi)
        throw std::logic_error("refine: disjoint enclosures (containment bug)");
    return Interval{lo, hi};
}

}  // namespace primcert
