#pragma once

// Exact-arithmetic reference path for small n.
//
// Primorials and the ratios N/phi(N), Psi(N)/N are held exactly (GMP
// integers/rationals). Logarithms are evaluated in 192-fractional-bit
// fixed point by argument reduction plus the atanh series with an explicit
// tail bound; every FixedReal carries a certified error in ulps. None of
// this shares code with the streaming interval pipeline or with the MPFR
// escalation path, including prime generation (trial division here).

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

#include "primcert/interval.hpp"

namespace primcert::oracle {

inline constexpr long kFracBits = 192;
inline constexpr u64 kOracleMaxN = 1000;

namespace detail {

inline const mpz_class& scale() {  // 2^kFracBits
    static const mpz_class s = mpz_class(1) << kFracBits;
    return s;
}

inline mpz_class cdiv(const mpz_class& a, const mpz_class& b) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (r != 0) q += 1;
    return q;
}

// Directed mpz * 2^-kFracBits -> double conversions. mpz_get_d truncates
// toward zero, so the exact value lies within one ulp above |d|.
inline double to_double_le(const mpz_class& v) {
    if (v < 0) {
        const double d = mpz_get_d(mpz_class(-v).get_mpz_t());
        return -primcert::detail::next_up(std::ldexp(primcert::detail::next_up(d), -kFracBits));
    }
    return primcert::detail::next_down(std::ldexp(mpz_get_d(v.get_mpz_t()), -kFracBits));
}

inline double to_double_ge(const mpz_class& v) {
    if (v < 0) {
        const double d = mpz_get_d(mpz_class(-v).get_mpz_t());
        return -primcert::detail::next_down(std::ldexp(d, -kFracBits));
    }
    const double d = mpz_get_d(v.get_mpz_t());
    return primcert::detail::next_up(std::ldexp(primcert::detail::next_up(d), -kFracBits));
}

}  // namespace detail

// value = mant * 2^-kFracBits, certified to lie in [mant - err, mant + err] ulps.
class FixedReal {
  public:
    FixedReal() : mant_(0), err_(0) {}
    FixedReal(mpz_class mant, mpz_class err) : mant_(std::move(mant)), err_(std::move(err)) {}

    static FixedReal from_u64(u64 v) {
        return FixedReal(mpz_class(static_cast<unsigned long>(v)) << kFracBits, 0);
    }

    static FixedReal from_mpq(const mpq_class& q) {
        mpz_class num = q.get_num() << kFracBits;
        mpz_class quot, rem;
        mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(),
                    q.get_den().get_mpz_t());
        return FixedReal(quot, rem == 0 ? 0 : 1);
    }

    static FixedReal from_mpz(const mpz_class& z) { return FixedReal(z << kFracBits, 0); }

    // Exact for any double whose binary exponent is >= -kFracBits.
    static FixedReal from_double(double d) {
        if (!std::isfinite(d)) throw std::invalid_argument("FixedReal: non-finite");
        mpq_class q;
        mpq_set_d(q.get_mpq_t(), d);
        return from_mpq(q);
    }

    const mpz_class& mant() const { return mant_; }
    const mpz_class& err() const { return err_; }

    FixedReal neg() const { return FixedReal(-mant_, err_); }

    FixedReal add(const FixedReal& o) const { return FixedReal(mant_ + o.mant_, err_ + o.err_); }
    FixedReal sub(const FixedReal& o) const { return FixedReal(mant_ - o.mant_, err_ + o.err_); }

    FixedReal mul(const FixedReal& o) const {
        mpz_class prod = mant_ * o.mant_;
        mpz_class m;
        mpz_fdiv_q_2exp(m.get_mpz_t(), prod.get_mpz_t(), kFracBits);
        mpz_class e = detail::cdiv((abs(mant_) + err_) * o.err_ + abs(o.mant_) * err_,
                                   detail::scale()) +
                      2;
        return FixedReal(m, e);
    }

    FixedReal mul_int(long s) const { return FixedReal(mant_ * s, err_ * std::labs(s)); }

    FixedReal div_uint(unsigned long s) const {
        mpz_class q;
        mpz_fdiv_q_ui(q.get_mpz_t(), mant_.get_mpz_t(), s);
        return FixedReal(q, detail::cdiv(err_, mpz_class(s)) + 1);
    }

    FixedReal div(const FixedReal& o) const {
        const mpz_class denom_min = abs(o.mant_) - o.err_;
        if (denom_min <= 0) throw std::domain_error("FixedReal::div: divisor not sign-definite");
        mpz_class q;
        {
            mpz_class num = mant_ << kFracBits;
            mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), o.mant_.get_mpz_t());
        }
        mpz_class e =
            detail::cdiv((err_ << kFracBits) + (abs(q) + 4) * o.err_, denom_min) + 2;
        return FixedReal(q, e);
    }

    FixedReal sqrt() const {
        if (mant_ - err_ < 0) throw std::domain_error("FixedReal::sqrt: negative");
        mpz_class shifted = mant_ << kFracBits;
        mpz_class s;
        mpz_sqrt(s.get_mpz_t(), shifted.get_mpz_t());
        mpz_class denom = 2 * s;
        if (denom == 0) denom = 1;
        return FixedReal(s, detail::cdiv(err_ << kFracBits, denom) + 2);
    }

    // Natural log; requires a certified-positive value.
    FixedReal log() const;

    // log(1 + x) through 2*atanh(x/(2+x)); requires 1 + x certified positive.
    FixedReal log1p() const;

    bool certainly_positive() const { return mant_ - err_ > 0; }

    Interval to_interval() const {
        return Interval{detail::to_double_le(mant_ - err_), detail::to_double_ge(mant_ + err_)};
    }

    // err / (|value| lower bound), rounded up; caller ensures sign-definite.
    double rel_error_bound() const {
        const mpz_class denom = abs(mant_) - err_;
        if (denom <= 0) return std::numeric_limits<double>::infinity();
        if (err_ == 0) return 0.0;
        // err/denom <= 2^(bits(err) - bits(denom) + 1)
        const long be = static_cast<long>(mpz_sizeinbase(err_.get_mpz_t(), 2));
        const long bd = static_cast<long>(mpz_sizeinbase(denom.get_mpz_t(), 2));
        return std::ldexp(1.0, static_cast<int>(be - bd + 1));
    }

  private:
    mpz_class mant_;
    mpz_class err_;
};

namespace detail {

// atanh(z) = z + z^3/3 + z^5/5 + ...  for |z| < 1, with the tail after the
// z^(2J+1) term bounded by |z|^(2J+3) / ((2J+3)(1 - z^2)).
inline FixedReal atanh_series(const FixedReal& z) {
    const FixedReal zsq = z.mul(z);
    const mpz_class zsq_hi = abs(zsq.mant()) + zsq.err();
    if (zsq_hi >= scale()) throw std::domain_error("atanh_series: |z| must be < 1");

    // pw_bound overestimates |z|^(2j+1) in ulps independently of the error
    // carried by pw, so the loop cannot stall above its stopping point.
    const mpz_class stop = cdiv(2 * scale(), scale() - zsq_hi) + 2;
    FixedReal sum = z;
    FixedReal pw = z;
    mpz_class pw_bound = abs(z.mant()) + z.err();
    unsigned long k = 1;
    while (pw_bound > stop) {
        pw = pw.mul(zsq);
        pw_bound = cdiv(pw_bound * zsq_hi, scale());
        k += 2;
        sum = sum.add(pw.div_uint(k));
    }
    const mpz_class tail = cdiv(pw_bound * zsq_hi, scale() - zsq_hi) + 1;
    return FixedReal(sum.mant(), sum.err() + tail);
}

inline const FixedReal& log2_const() {
    static const FixedReal l2 = [] {
        const FixedReal third = FixedReal::from_mpq(mpq_class(1, 3));
        return atanh_series(third).mul_int(2);
    }();
    return l2;
}

}  // namespace detail

inline FixedReal FixedReal::log() const {
    if (!certainly_positive()) throw std::domain_error("FixedReal::log: requires value > 0");
    // Reduce to m in [1/2, 1): value = m * 2^g with g = bitlen(mant) - kFracBits.
    const long bits = static_cast<long>(mpz_sizeinbase(mant_.get_mpz_t(), 2));
    const long g = bits - kFracBits;
    FixedReal m;
    if (g >= 0) {
        mpz_class mm;
        mpz_fdiv_q_2exp(mm.get_mpz_t(), mant_.get_mpz_t(), static_cast<mp_bitcnt_t>(g));
        mpz_class me = detail::cdiv(err_, mpz_class(1) << g) + 1;
        m = FixedReal(mm, me);
    } else {
        m = FixedReal(mant_ << static_cast<mp_bitcnt_t>(-g), err_ << static_cast<mp_bitcnt_t>(-g));
    }
    const FixedReal one = FixedReal::from_u64(1);
    const FixedReal z = m.sub(one).div(m.add(one));
    return detail::atanh_series(z).mul_int(2).add(detail::log2_const().mul_int(g));
}

inline FixedReal FixedReal::log1p() const {
    if (!add(FixedReal::from_u64(1)).certainly_positive())
        throw std::domain_error("FixedReal::log1p: requires 1 + x > 0");
    const FixedReal z = div(add(FixedReal::from_u64(2)));
    return detail::atanh_series(z).mul_int(2);
}

// ---- exact primorials ----

namespace detail {

inline u64 next_prime_trial(u64 p) {
    for (u64 c = p + 1;; ++c) {
        bool prime = c >= 2;
        for (u64 d = 2; d * d <= c; ++d) {
            if (c % d == 0) {
                prime = false;
                break;
            }
        }
        if (prime) return c;
    }
}

}  // namespace detail

struct ExactPrimorial {
    u64 n = 0;
    mpz_class value;       // N_n
    mpq_class euler_ratio; // N_n / phi(N_n) = prod p/(p-1)
    mpq_class psi_ratio;   // Psi(N_n) / N_n = prod (p+1)/p
};

// Incremental exact primorial builder (oracle scale: n <= kOracleMaxN, with
// one index of slack so inequality right sides at n = kOracleMaxN resolve).
class PrimorialSequence {
  public:
    PrimorialSequence() {
        cur_.n = 0;
        cur_.value = 1;
        cur_.euler_ratio = 1;
        cur_.psi_ratio = 1;
    }

    const ExactPrimorial& current() const { return cur_; }

    const ExactPrimorial& advance() {
        if (cur_.n >= kOracleMaxN + 1)
            throw std::out_of_range("oracle: beyond supported scale");
        last_prime_ = cur_.n == 0 ? 2 : detail::next_prime_trial(last_prime_);
        cur_.n += 1;
        cur_.value *= last_prime_;
        cur_.euler_ratio *= mpq_class(last_prime_, last_prime_ - 1);
        cur_.psi_ratio *= mpq_class(last_prime_ + 1, last_prime_);
        cur_.euler_ratio.canonicalize();
        cur_.psi_ratio.canonicalize();
        return cur_;
    }

    u64 last_prime() const { return last_prime_; }

  private:
    ExactPrimorial cur_;
    u64 last_prime_ = 0;
};

inline ExactPrimorial exact_primorial(u64 n) {
    if (n < 1 || n > kOracleMaxN)
        throw std::out_of_range("exact_primorial: n outside oracle scale [1, 1000]");
    PrimorialSequence seq;
    for (u64 i = 0; i < n; ++i) seq.advance();
    return seq.current();
}

// theta(p_n) = log N_n, as one log of the exact primorial (a different
// algebraic route than the streaming sum of log p).
inline FixedReal oracle_theta(const ExactPrimorial& pri) {
    return FixedReal::from_mpz(pri.value).log();
}

inline FixedReal oracle_u_from(const ExactPrimorial& pri) {
    if (pri.n < 2) throw std::domain_error("oracle_u: requires n >= 2");
    FixedReal r = FixedReal::from_mpq(pri.euler_ratio).div(oracle_theta(pri).log());
    if (r.rel_error_bound() > 1e-35) throw std::logic_error("oracle_u: error bound exceeded");
    return r;
}

inline FixedReal oracle_v_from(const ExactPrimorial& pri) {
    if (pri.n < 2) throw std::domain_error("oracle_v: requires n >= 2");
    FixedReal r = FixedReal::from_mpq(pri.psi_ratio).div(oracle_theta(pri).log());
    if (r.rel_error_bound() > 1e-35) throw std::logic_error("oracle_v: error bound exceeded");
    return r;
}

inline FixedReal oracle_u(u64 n) {
    if (n < 2 || n > kOracleMaxN)
        throw std::out_of_range("oracle_u: n outside oracle scale [2, 1000]");
    return oracle_u_from(exact_primorial(n));
}

inline FixedReal oracle_v(u64 n) {
    if (n < 2 || n > kOracleMaxN)
        throw std::out_of_range("oracle_v: n outside oracle scale [2, 1000]");
    return oracle_v_from(exact_primorial(n));
}

// Closed forms of the inequality sides at index n
// (pri = N_n, pri_next = N_{n+1}, p_next = p_{n+1}).

inline FixedReal oracle_ineq_lhs(const ExactPrimorial& pri, u64 p_next) {
    return FixedReal::from_u64(p_next).log().div(oracle_theta(pri)).log1p();
}

inline FixedReal oracle_ineq1_rhs(const ExactPrimorial& pri_next, u64 p_next) {
    return oracle_theta(pri_next).log().div(FixedReal::from_u64(p_next));
}

inline FixedReal oracle_ineq2_rhs(const ExactPrimorial& pri, u64 p_next) {
    return oracle_theta(pri).log().div(FixedReal::from_u64(p_next));
}

}  // namespace primcert::oracle
