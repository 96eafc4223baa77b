#pragma once

// Segmented sieve of Eratosthenes over 64-bit ranges.
//
// Base primes up to sqrt(hi) are cached once and reused across segments.
// A segment's prime list is a pure function of [lo, hi), so concurrent
// segment production (one sieve per worker) composes into bit-identical
// streams regardless of worker count or segment boundaries.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "primcert/interval.hpp"

namespace primcert {

inline constexpr u64 kDefaultSegmentSize = u64{1} << 20;

// Trial division; used for argument validation, not for bulk generation.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    for (u64 d = 5; d * d <= n; d += 6) {
        if (n % d == 0 || n % (d + 2) == 0) return false;
    }
    return true;
}

struct SieveSegment {
    u64 lo = 0;  // inclusive
    u64 hi = 0;  // exclusive
    std::vector<u64> primes;
};

class SegmentedSieve {
  public:
    explicit SegmentedSieve(u64 segment_size = kDefaultSegmentSize)
        : segment_size_(segment_size) {
        if (segment_size_ < 2)
            throw std::invalid_argument("SegmentedSieve: segment size must be >= 2");
    }

    u64 segment_size() const { return segment_size_; }

    // Exactly the primes in [lo, hi), ascending.
    SieveSegment segment(u64 lo, u64 hi) {
        if (!(2 <= lo && lo < hi))
            throw std::invalid_argument("sieve_segment: requires 2 <= lo < hi");
        if (hi - lo > segment_size_)
            throw std::invalid_argument("sieve_segment: span exceeds segment size");
        ensure_base_primes(isqrt(hi - 1));

        std::vector<char> composite(hi - lo, 0);
        for (u64 p : base_) {
            if (p * p >= hi) break;
            u64 start = ((lo + p - 1) / p) * p;
            if (start < p * p) start = p * p;
            for (u64 m = start; m < hi; m += p) composite[m - lo] = 1;
        }
        SieveSegment seg{lo, hi, {}};
        for (u64 v = lo; v < hi; ++v) {
            if (!composite[v - lo]) seg.primes.push_back(v);
        }
        return seg;
    }

  private:
    static u64 isqrt(u64 n) {
        u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
        while (r > 0 && r * r > n) --r;
        while ((r + 1) * (r + 1) <= n) ++r;
        return r;
    }

    void ensure_base_primes(u64 limit) {
        if (limit <= base_limit_) return;
        u64 new_limit = base_limit_ ? base_limit_ : 16;
        while (new_limit < limit) new_limit *= 2;
        std::vector<char> mark(new_limit + 1, 1);
        mark[0] = 0;
        if (new_limit >= 1) mark[1] = 0;
        for (u64 i = 2; i * i <= new_limit; ++i) {
            if (!mark[i]) continue;
            for (u64 j = i * i; j <= new_limit; j += i) mark[j] = 0;
        }
        base_.clear();
        for (u64 i = 2; i <= new_limit; ++i) {
            if (mark[i]) base_.push_back(i);
        }
        base_limit_ = new_limit;
    }

    u64 segment_size_;
    std::vector<u64> base_;
    u64 base_limit_ = 0;
};

// Pull-based ascending prime stream starting at the first prime >= start.
class PrimeStream {
  public:
    explicit PrimeStream(u64 start = 2, u64 segment_size = kDefaultSegmentSize)
        : sieve_(segment_size), next_lo_(start < 2 ? 2 : start) {}

    u64 next() {
        while (pos_ >= buf_.primes.size()) {
            const u64 hi = next_lo_ + sieve_.segment_size();
            buf_ = sieve_.segment(next_lo_, hi);
            next_lo_ = hi;
            pos_ = 0;
        }
        return buf_.primes[pos_++];
    }

  private:
    SegmentedSieve sieve_;
    u64 next_lo_;
    SieveSegment buf_;
    std::size_t pos_ = 0;
};

inline SieveSegment sieve_segment(u64 lo, u64 hi, u64 segment_size = kDefaultSegmentSize) {
    return SegmentedSieve(segment_size).segment(lo, hi);
}

// Yields (n, p_n) for n = 1..n_max. f may return void, or false to stop early.
template <class F>
void iterate_primes(u64 n_max, F&& f, u64 segment_size = kDefaultSegmentSize) {
    if (n_max < 1) throw std::invalid_argument("iterate_primes: n_max must be >= 1");
    PrimeStream stream(2, segment_size);
    for (u64 n = 1; n <= n_max; ++n) {
        const u64 p = stream.next();
        if constexpr (std::is_same_v<decltype(f(n, p)), bool>) {
            if (!f(n, p)) return;
        } else {
            f(n, p);
        }
    }
}

inline u64 nth_prime(u64 n) {
    if (n < 1) throw std::invalid_argument("nth_prime: n must be >= 1");
    u64 result = 0;
    iterate_primes(n, [&](u64 k, u64 p) {
        if (k == n) result = p;
    });
    return result;
}

}  // namespace primcert
