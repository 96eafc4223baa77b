#pragma once

// Streaming primorial state and the certified sequence checks.
//
// Everything runs in log space: theta = Sum log p equals log N_n, so
// N_n itself is never materialized. The three prefix sums are held in
// compensated accumulators; per-index quantities are evaluated through
// the generic arithmetic context so the identical formulas serve both
// the hardware path and 128/256-bit escalation.
//
//   u_n = exp(Sum log(p/(p-1))) / log theta(p_n)      (totient ratio)
//   v_n = exp(Sum log(1+1/p))   / log theta(p_n)      (psi ratio)
//   inequality (1):  log1p(log p_{n+1} / theta(p_n)) > log theta(p_{n+1}) / p_{n+1}
//   inequality (2):  same left side                   > log theta(p_n)   / p_{n+1}

#include <optional>
#include <span>
#include <vector>

#include "primcert/accumulate.hpp"
#include "primcert/interval.hpp"
#include "primcert/mpfr_interval.hpp"
#include "primcert/sieve.hpp"

namespace primcert {

struct PrimorialState {
    u64 n = 0;
    u64 p_n = 0;
    CompensatedSum theta;      // Sum log p               = log N_n
    CompensatedSum euler_sum;  // Sum log(p/(p-1))        = log(N_n/phi(N_n))
    CompensatedSum psi_sum;    // Sum log(1+1/p)          = log(Psi(N_n)/N_n)

    Interval theta_iv() const { return theta.enclosure(); }
    Interval euler_iv() const { return euler_sum.enclosure(); }
    Interval psi_iv() const { return psi_sum.enclosure(); }
};

// Absorbs the next prime. theta += log p; euler_sum += log p - log(p-1)
// (two exact integer arguments, interval-safe subtraction); psi_sum += log1p(1/p).
inline void advance_state(PrimorialState& s, u64 p) {
    if (s.n == 0) {
        if (p != 2) throw std::invalid_argument("advance_state: first prime must be 2");
    } else if (p <= s.p_n) {
        throw std::invalid_argument("advance_state: primes must be strictly increasing");
    }
    if (!is_prime_u64(p)) throw std::invalid_argument("advance_state: p is not prime");

    const Interval log_p = iv_log(Interval::from_u64(p));
    s.theta.add(log_p);
    s.euler_sum.add(iv_sub(log_p, iv_log(Interval::from_u64(p - 1))));
    s.psi_sum.add(iv_log1p(iv_div(Interval::point(1.0), Interval::from_u64(p))));
    s.n += 1;
    s.p_n = p;
}

// ---- formula kernels, generic over the arithmetic context ----

template <class Ctx>
typename Ctx::ivl eval_u(const Ctx& cx, const typename Ctx::ivl& euler_sum,
                         const typename Ctx::ivl& theta) {
    return cx.div(cx.exp(euler_sum), cx.log(theta));
}

template <class Ctx>
typename Ctx::ivl eval_v(const Ctx& cx, const typename Ctx::ivl& psi_sum,
                         const typename Ctx::ivl& theta) {
    return cx.div(cx.exp(psi_sum), cx.log(theta));
}

template <class Ctx>
typename Ctx::ivl eval_ineq_lhs(const Ctx& cx, const typename Ctx::ivl& theta_n, u64 p_next) {
    return cx.log1p(cx.div(cx.log(cx.from_u64(p_next)), theta_n));
}

template <class Ctx>
typename Ctx::ivl eval_ineq_rhs(const Ctx& cx, const typename Ctx::ivl& theta, u64 p_next) {
    return cx.div(cx.log(theta), cx.from_u64(p_next));
}

// ---- hardware-path operations ----

inline Interval compute_u(const PrimorialState& s) {
    if (s.n < 2)
        throw std::domain_error("compute_u: u_1 undefined (log log N_1 < 0)");
    DoubleCtx cx;
    return eval_u(cx, s.euler_iv(), s.theta_iv());
}

inline Interval compute_v(const PrimorialState& s) {
    if (s.n < 2)
        throw std::domain_error("compute_v: v_1 undefined (log log N_1 < 0)");
    DoubleCtx cx;
    return eval_v(cx, s.psi_iv(), s.theta_iv());
}

inline Verdict check_nicolas(const PrimorialState& s) {
    return strictly_greater(compute_u(s), constants().e_gamma);
}

inline Verdict check_sole_planat(const PrimorialState& s) {
    if (s.n < 3)
        throw std::domain_error("check_sole_planat: defined for n >= 3");
    return strictly_greater(compute_v(s), constants().e_gamma_over_zeta2);
}

struct IneqSides {
    Interval lhs;
    Interval rhs;
    Verdict verdict = Verdict::Undecided;
};

inline IneqSides check_ineq1(const PrimorialState& s_n, u64 p_next, const Interval& theta_next) {
    DoubleCtx cx;
    IneqSides r;
    r.lhs = eval_ineq_lhs(cx, s_n.theta_iv(), p_next);
    r.rhs = eval_ineq_rhs(cx, theta_next, p_next);
    r.verdict = strictly_greater(r.lhs, r.rhs);
    return r;
}

inline IneqSides check_ineq2(const PrimorialState& s_n, u64 p_next) {
    DoubleCtx cx;
    IneqSides r;
    r.lhs = eval_ineq_lhs(cx, s_n.theta_iv(), p_next);
    r.rhs = eval_ineq_rhs(cx, s_n.theta_iv(), p_next);
    r.verdict = strictly_greater(r.lhs, r.rhs);
    return r;
}

inline Verdict check_decrease_direct(const Interval& seq_n, const Interval& seq_next) {
    return strictly_greater(seq_n, seq_next);
}

// Emitted record for index n. Fields that need n >= 2 (u, v, the criteria,
// the direct decreases) stay empty below their domain start.
struct SequencePoint {
    u64 n = 0;
    u64 p_n = 0;
    std::optional<Interval> u;
    std::optional<Interval> v;
    Interval ineq1_lhs;
    Interval ineq1_rhs;
    Interval ineq2_lhs;
    Interval ineq2_rhs;
    std::optional<Verdict> nicolas;
    std::optional<Verdict> sole_planat;
    Verdict ineq1 = Verdict::Undecided;
    Verdict ineq2 = Verdict::Undecided;
    std::optional<Verdict> u_decrease_direct;
    std::optional<Verdict> v_decrease_direct;
    int escalations = 0;       // checks re-evaluated at higher precision
    int undecided_final = 0;   // still undecided after escalation
};

// Builds the record for index n from the states at n and n+1.
inline SequencePoint build_sequence_point(const PrimorialState& s_n,
                                          const PrimorialState& s_next) {
    SequencePoint pt;
    pt.n = s_n.n;
    pt.p_n = s_n.p_n;
    const u64 p_next = s_next.p_n;

    const IneqSides i1 = check_ineq1(s_n, p_next, s_next.theta_iv());
    const IneqSides i2 = check_ineq2(s_n, p_next);
    pt.ineq1_lhs = i1.lhs;
    pt.ineq1_rhs = i1.rhs;
    pt.ineq2_lhs = i2.lhs;
    pt.ineq2_rhs = i2.rhs;
    pt.ineq1 = i1.verdict;
    pt.ineq2 = i2.verdict;

    if (s_n.n >= 2) {
        pt.u = compute_u(s_n);
        pt.v = compute_v(s_n);
        pt.nicolas = check_nicolas(s_n);
        if (s_n.n >= 3) pt.sole_planat = check_sole_planat(s_n);
        pt.u_decrease_direct = check_decrease_direct(*pt.u, compute_u(s_next));
        pt.v_decrease_direct = check_decrease_direct(*pt.v, compute_v(s_next));
    }
    return pt;
}

namespace detail {

// Prefix sums at escalated precision; plain directed adds (error at most
// n ulps per bound, i.e. <= n * 2^-bits * magnitude).
struct BigSums {
    BigInterval theta;
    BigInterval euler_sum;
    BigInterval psi_sum;
};

inline BigSums big_sums(const BigCtx& cx, std::span<const u64> primes) {
    BigSums s{BigInterval(cx.prec()), BigInterval(cx.prec()), BigInterval(cx.prec())};
    const BigInterval one = cx.from_u64(1);
    for (u64 p : primes) {
        const BigInterval log_p = cx.log(cx.from_u64(p));
        s.theta = cx.add(s.theta, log_p);
        s.euler_sum = cx.add(s.euler_sum, cx.sub(log_p, cx.log(cx.from_u64(p - 1))));
        s.psi_sum = cx.add(s.psi_sum, cx.log1p(cx.div(one, cx.from_u64(p))));
    }
    return s;
}

}  // namespace detail

// One escalation pass: every Undecided verdict in pt is re-derived at
// `bits` fractional bits from the prime prefix (primes[0..n] = p_1..p_{n+1});
// enclosures are refined by intersection. A verdict still undecided after
// this pass is final.
inline void escalate_sequence_point(SequencePoint& pt, std::span<const u64> primes, int bits) {
    const u64 n = pt.n;
    if (primes.size() < n + 1)
        throw std::invalid_argument("escalate_sequence_point: need primes up to p_{n+1}");

    auto needs = [](const std::optional<Verdict>& v) {
        return v.has_value() && *v == Verdict::Undecided;
    };
    const bool any = pt.ineq1 == Verdict::Undecided || pt.ineq2 == Verdict::Undecided ||
                     needs(pt.nicolas) || needs(pt.sole_planat) ||
                     needs(pt.u_decrease_direct) || needs(pt.v_decrease_direct);
    if (!any) return;

    BigCtx cx(bits);
    detail::BigSums at_n = detail::big_sums(cx, primes.subspan(0, n));
    const u64 p_next = primes[n];
    detail::BigSums at_next = at_n;
    {
        const BigInterval log_p = cx.log(cx.from_u64(p_next));
        at_next.theta = cx.add(at_next.theta, log_p);
        at_next.euler_sum =
            cx.add(at_next.euler_sum, cx.sub(log_p, cx.log(cx.from_u64(p_next - 1))));
        at_next.psi_sum =
            cx.add(at_next.psi_sum, cx.log1p(cx.div(cx.from_u64(1), cx.from_u64(p_next))));
    }

    auto settle = [&](Verdict& verdict, const BigInterval& a, const BigInterval& b) {
        ++pt.escalations;
        verdict = strictly_greater(a, b);
        if (verdict == Verdict::Undecided) ++pt.undecided_final;
    };

    if (pt.ineq1 == Verdict::Undecided || pt.ineq2 == Verdict::Undecided) {
        const BigInterval lhs = eval_ineq_lhs(cx, at_n.theta, p_next);
        pt.ineq1_lhs = refine(pt.ineq1_lhs, lhs);
        pt.ineq2_lhs = pt.ineq1_lhs;
        if (pt.ineq1 == Verdict::Undecided) {
            const BigInterval rhs = eval_ineq_rhs(cx, at_next.theta, p_next);
            pt.ineq1_rhs = refine(pt.ineq1_rhs, rhs);
            settle(pt.ineq1, lhs, rhs);
        }
        if (pt.ineq2 == Verdict::Undecided) {
            const BigInterval rhs = eval_ineq_rhs(cx, at_n.theta, p_next);
            pt.ineq2_rhs = refine(pt.ineq2_rhs, rhs);
            settle(pt.ineq2, lhs, rhs);
        }
    }

    if (needs(pt.nicolas) || needs(pt.u_decrease_direct) || needs(pt.sole_planat) ||
        needs(pt.v_decrease_direct)) {
        const BigInterval u_n = eval_u(cx, at_n.euler_sum, at_n.theta);
        const BigInterval v_n = eval_v(cx, at_n.psi_sum, at_n.theta);
        if (pt.u) pt.u = refine(*pt.u, u_n);
        if (pt.v) pt.v = refine(*pt.v, v_n);
        if (needs(pt.nicolas)) {
            settle(*pt.nicolas, u_n, big_e_gamma(cx.prec()));
        }
        if (needs(pt.sole_planat)) {
            settle(*pt.sole_planat, v_n, big_e_gamma_over_zeta2(cx.prec()));
        }
        if (needs(pt.u_decrease_direct)) {
            settle(*pt.u_decrease_direct, u_n, eval_u(cx, at_next.euler_sum, at_next.theta));
        }
        if (needs(pt.v_decrease_direct)) {
            settle(*pt.v_decrease_direct, v_n, eval_v(cx, at_next.psi_sum, at_next.theta));
        }
    }
}

}  // namespace primcert
