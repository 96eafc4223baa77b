#pragma once

// Certified double-precision interval arithmetic with outward rounding.
//
// Every operation returns an interval guaranteed to contain the exact
// mathematical result whenever the operand intervals contain theirs.
// Outward rounding is implemented by post-operation ulp widening
// (nextafter), so no global rounding-mode state is touched and results
// are deterministic across platforms.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace primcert {

using u64 = std::uint64_t;

enum class Verdict { CertifiedTrue, CertifiedFalse, Undecided };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::CertifiedTrue: return "certified_true";
        case Verdict::CertifiedFalse: return "certified_false";
        default: return "undecided";
    }
}

namespace detail {

inline double next_down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double next_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

// Sums/differences/products rounded to nearest are within 0.5 ulp of the
// exact value, so one nextafter step past the computed result bounds it.
inline double add_up(double a, double b) { return next_up(a + b); }
inline double add_down(double a, double b) { return next_down(a + b); }
inline double sub_up(double a, double b) { return next_up(a - b); }
inline double sub_down(double a, double b) { return next_down(a - b); }
inline double mul_up(double a, double b) { return next_up(a * b); }

// glibc's log/log1p/exp are not correctly rounded; their documented maximum
// errors on x86-64 are 1-2 ulp. Widening by 3 ulp bounds them with margin;
// the containment fuzz test checks this against 256-bit evaluation.
inline constexpr int kLibmSlackUlps = 3;

inline double widen_down(double x, int ulps) {
    for (int i = 0; i < ulps; ++i) x = next_down(x);
    return x;
}
inline double widen_up(double x, int ulps) {
    for (int i = 0; i < ulps; ++i) x = next_up(x);
    return x;
}

}  // namespace detail

// Closed interval [lo, hi]; both bounds finite.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval point(double x) { return bounds(x, x); }

    static Interval bounds(double lo, double hi) {
        if (!(std::isfinite(lo) && std::isfinite(hi)) || lo > hi)
            throw std::invalid_argument("Interval: bounds must be finite with lo <= hi");
        return Interval{lo, hi};
    }

    // Exact for integers below 2^53; a 1-ulp-widened enclosure above.
    static Interval from_u64(u64 v) {
        auto d = static_cast<double>(v);
        if (v <= (u64{1} << 53)) return Interval{d, d};
        return Interval{detail::next_down(d), detail::next_up(d)};
    }

    double width() const { return detail::sub_up(hi, lo); }
    double mid() const { return lo + 0.5 * (hi - lo); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
};

inline Interval iv_neg(const Interval& a) { return Interval{-a.hi, -a.lo}; }

inline Interval iv_add(const Interval& a, const Interval& b) {
    return Interval{detail::add_down(a.lo, b.lo), detail::add_up(a.hi, b.hi)};
}

inline Interval iv_sub(const Interval& a, const Interval& b) {
    return Interval{detail::sub_down(a.lo, b.hi), detail::sub_up(a.hi, b.lo)};
}

inline Interval iv_mul(const Interval& a, const Interval& b) {
    const double p1 = a.lo * b.lo;
    const double p2 = a.lo * b.hi;
    const double p3 = a.hi * b.lo;
    const double p4 = a.hi * b.hi;
    const double lo = std::fmin(std::fmin(p1, p2), std::fmin(p3, p4));
    const double hi = std::fmax(std::fmax(p1, p2), std::fmax(p3, p4));
    return Interval{detail::next_down(lo), detail::next_up(hi)};
}

inline Interval iv_div(const Interval& a, const Interval& b) {
    if (b.lo <= 0.0 && b.hi >= 0.0)
        throw std::domain_error("iv_div: divisor interval contains zero");
    const double q1 = a.lo / b.lo;
    const double q2 = a.lo / b.hi;
    const double q3 = a.hi / b.lo;
    const double q4 = a.hi / b.hi;
    const double lo = std::fmin(std::fmin(q1, q2), std::fmin(q3, q4));
    const double hi = std::fmax(std::fmax(q1, q2), std::fmax(q3, q4));
    return Interval{detail::next_down(lo), detail::next_up(hi)};
}

// Monotone increasing libm functions: enclose as [f(lo) widened down, f(hi) widened up].

inline Interval iv_log(const Interval& a) {
    if (!(a.lo > 0.0)) throw std::domain_error("iv_log: requires lo > 0");
    return Interval{detail::widen_down(std::log(a.lo), detail::kLibmSlackUlps),
                    detail::widen_up(std::log(a.hi), detail::kLibmSlackUlps)};
}

inline Interval iv_log1p(const Interval& a) {
    if (!(a.lo > -1.0)) throw std::domain_error("iv_log1p: requires lo > -1");
    return Interval{detail::widen_down(std::log1p(a.lo), detail::kLibmSlackUlps),
                    detail::widen_up(std::log1p(a.hi), detail::kLibmSlackUlps)};
}

inline Interval iv_exp(const Interval& a) {
    double lo = detail::widen_down(std::exp(a.lo), detail::kLibmSlackUlps);
    double hi = detail::widen_up(std::exp(a.hi), detail::kLibmSlackUlps);
    if (std::isinf(hi)) throw std::domain_error("iv_exp: overflow");
    if (lo < 0.0) lo = 0.0;  // exp is positive
    return Interval{lo, hi};
}

inline Interval iv_sqrt(const Interval& a) {
    if (!(a.lo >= 0.0)) throw std::domain_error("iv_sqrt: requires lo >= 0");
    // IEEE sqrt is correctly rounded: 1 ulp suffices.
    double lo = detail::next_down(std::sqrt(a.lo));
    if (lo < 0.0) lo = 0.0;
    return Interval{lo, detail::next_up(std::sqrt(a.hi))};
}

// Certified three-valued comparison a > b. Certainty only on disjoint
// enclosures; overlap yields Undecided, never a guess.
inline Verdict strictly_greater(const Interval& a, const Interval& b) {
    if (a.lo > b.hi) return Verdict::CertifiedTrue;
    if (a.hi <= b.lo) return Verdict::CertifiedFalse;
    return Verdict::Undecided;
}

namespace detail {

// 40-significant-digit decimal literal -> enclosing interval.
// strtod rounds correctly to nearest, so the true constant lies within
// 0.5 ulp + 1e-40 of the parsed double; 1 ulp outward on each side covers it.
inline Interval literal_interval(const char* digits40) {
    char* end = nullptr;
    const double d = std::strtod(digits40, &end);
    if (end == digits40) throw std::logic_error("literal_interval: parse failure");
    return Interval{next_down(d), next_up(d)};
}

}  // namespace detail

// Embedded mathematical constants; each interval has width 2 ulps and
// contains the true value.
struct Constants {
    Interval euler_gamma;
    Interval e_gamma;             // exp(gamma)
    Interval zeta2;               // zeta(2) = pi^2/6
    Interval e_gamma_over_zeta2;  // exp(gamma)/zeta(2)
};

inline const Constants& constants() {
    static const Constants c = {
        detail::literal_interval("0.5772156649015328606065120900824024310422"),
        detail::literal_interval("1.781072417990197985236504103107179549170"),
        detail::literal_interval("1.644934066848226436472415166646025189219"),
        detail::literal_interval("1.082762193260924580122188038190926570184"),
    };
    return c;
}

}  // namespace primcert
