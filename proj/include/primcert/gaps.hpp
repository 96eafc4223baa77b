#pragma once

// Prime-gap diagnostics: Cramer ratio gap/log^2 p_n, the RH-conditional
// ratio gap/(sqrt(p_n) log p_n), and the Littlewood threshold margin
// theta(p_n) - (p_n + C sqrt(p_n) log log log p_n).

#include <optional>

#include "primcert/interval.hpp"
#include "primcert/sequences.hpp"
#include "primcert/sieve.hpp"

namespace primcert {

// log log log p_n needs log log p_n > 0, i.e. p_n > e^e; the smallest
// admissible prime is 17.
inline constexpr u64 kLittlewoodMinPrime = 17;

// Ratio extremes are tracked for p_n >= 5 only; the gaps at p = 2 and
// p = 3 sit above every later ratio and would pin the maxima forever.
inline constexpr u64 kRatioExtremeMinPrime = 5;

struct GapRecord {
    u64 n = 0;
    u64 p_n = 0;
    u64 p_next = 0;
    u64 gap = 0;
    Interval cramer_ratio;                         // gap / log^2 p_n
    Interval rh_ratio;                             // gap / (sqrt(p_n) log p_n)
    std::optional<Interval> littlewood_margin;     // theta(p_n) - k_n, p_n >= 17
};

inline GapRecord gap_record(const PrimorialState& s, u64 p_next, double c_littlewood) {
    if (p_next <= s.p_n)
        throw std::invalid_argument("gap_record: p_next must exceed p_n");
    if (!(c_littlewood > 0.0))
        throw std::invalid_argument("gap_record: C must be positive");

    GapRecord r;
    r.n = s.n;
    r.p_n = s.p_n;
    r.p_next = p_next;
    r.gap = p_next - s.p_n;

    const Interval gap_iv = Interval::from_u64(r.gap);
    const Interval p_iv = Interval::from_u64(s.p_n);
    const Interval log_p = iv_log(p_iv);
    r.cramer_ratio = iv_div(gap_iv, iv_mul(log_p, log_p));
    r.rh_ratio = iv_div(gap_iv, iv_mul(iv_sqrt(p_iv), log_p));

    if (s.p_n >= kLittlewoodMinPrime) {
        const Interval lll = iv_log(iv_log(log_p));
        const Interval k_n = iv_add(
            p_iv, iv_mul(Interval::point(c_littlewood), iv_mul(iv_sqrt(p_iv), lll)));
        r.littlewood_margin = iv_sub(s.theta_iv(), k_n);
    }
    return r;
}

// Running extremes with a deterministic order: strictly-greater midpoint
// updates, so ties keep the smaller n.
struct GapExtremes {
    u64 records = 0;
    u64 max_gap = 0;
    u64 max_gap_n = 0;
    std::optional<Interval> max_cramer;
    u64 max_cramer_n = 0;
    std::optional<Interval> max_rh;
    u64 max_rh_n = 0;
    std::optional<Interval> max_littlewood;
    u64 max_littlewood_n = 0;
    u64 positive_margin_count = 0;

    void observe(const GapRecord& r) {
        ++records;
        if (r.gap > max_gap) {
            max_gap = r.gap;
            max_gap_n = r.n;
        }
        if (r.p_n >= kRatioExtremeMinPrime) {
            if (!max_cramer || r.cramer_ratio.mid() > max_cramer->mid()) {
                max_cramer = r.cramer_ratio;
                max_cramer_n = r.n;
            }
            if (!max_rh || r.rh_ratio.mid() > max_rh->mid()) {
                max_rh = r.rh_ratio;
                max_rh_n = r.n;
            }
        }
        if (r.littlewood_margin) {
            if (!max_littlewood || r.littlewood_margin->mid() > max_littlewood->mid()) {
                max_littlewood = *r.littlewood_margin;
                max_littlewood_n = r.n;
            }
            if (r.littlewood_margin->lo > 0.0) ++positive_margin_count;
        }
    }
};

// Gap summary over the first n_max primes (records n = 1 .. n_max-1).
inline GapExtremes scan_extremes(u64 n_max, double c_littlewood,
                                 u64 segment_size = kDefaultSegmentSize) {
    if (n_max < 2) throw std::invalid_argument("scan_extremes: n_max must be >= 2");
    GapExtremes ex;
    PrimorialState state;
    PrimeStream stream(2, segment_size);
    u64 p = stream.next();
    for (u64 n = 1; n < n_max; ++n) {
        advance_state(state, p);
        const u64 p_next = stream.next();
        ex.observe(gap_record(state, p_next, c_littlewood));
        p = p_next;
    }
    return ex;
}

}  // namespace primcert
