#pragma once

// Error-tracked compensated summation of intervals.
//
// The accumulator adds the lower bounds of its inputs with a TwoSum
// compensation term and keeps certified radii around the compensated
// value: rad_up_ absorbs the input interval widths, and both radii absorb
// the rounding of the compensation updates. The resulting enclosure stays
// near Sum(width_i) + O(eps * |total|) wide instead of the O(n * ulp)
// growth of plain interval folding.

#include <cmath>

#include "primcert/interval.hpp"

namespace primcert {

namespace detail {

// |fl(a+b) - (a+b)| <= 2^-53 * |fl(a+b)|; additions with subnormal results
// are exact, where the bound degenerates to 0 <= tiny.
inline constexpr double kEps = 1.0 / 9007199254740992.0;  // 2^-53

}  // namespace detail

class CompensatedSum {
  public:
    CompensatedSum() = default;

    // Canonical state reconstruction: a pure function of the interval, so
    // checkpoint/resume and in-place normalization land on identical bits.
    static CompensatedSum from_interval(const Interval& iv) {
        CompensatedSum s;
        s.main_ = iv.lo;
        s.comp_ = 0.0;
        s.rad_down_ = 0.0;
        s.rad_up_ = detail::sub_up(iv.hi, iv.lo);
        return s;
    }

    void add(const Interval& x) {
        // TwoSum (Knuth): s + e == main_ + x.lo exactly.
        const double s = main_ + x.lo;
        const double bb = s - main_;
        const double e = (main_ - (s - bb)) + (x.lo - bb);
        main_ = s;
        comp_ += e;
        const double delta = detail::kEps * std::fabs(comp_);
        rad_down_ = detail::add_up(rad_down_, delta);
        rad_up_ = detail::add_up(detail::add_up(rad_up_, delta), x.width());
    }

    Interval enclosure() const {
        const double m = main_ + comp_;
        const double slack = detail::kEps * std::fabs(m);
        const double lo = detail::sub_down(m, detail::add_up(rad_down_, slack));
        const double hi = detail::add_up(m, detail::add_up(rad_up_, slack));
        return Interval{lo, hi};
    }

    // Collapses to the canonical form; returns the interval it was built
    // from (the exact payload a checkpoint must store).
    Interval normalize() {
        const Interval iv = enclosure();
        *this = from_interval(iv);
        return iv;
    }

  private:
    double main_ = 0.0;
    double comp_ = 0.0;
    double rad_down_ = 0.0;
    double rad_up_ = 0.0;
};

}  // namespace primcert
