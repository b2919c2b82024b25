#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace plapmix {

// Nonnegative scalar kept in log form so that p-th powers of small
// differences survive arbitrarily large exponents.  zero==true means the
// exact value 0 (log_value is then meaningless).
struct LogNonneg {
    double log_value = -std::numeric_limits<double>::infinity();
    bool zero = true;

    static LogNonneg from_value(double v) {
        LogNonneg r;
        if (v > 0.0) {
            r.log_value = std::log(v);
            r.zero = false;
        }
        return r;
    }
    static LogNonneg from_log(double lv) {
        LogNonneg r;
        r.log_value = lv;
        r.zero = false;
        return r;
    }
    // May underflow to 0 or overflow to inf; callers needing the exact
    // magnitude at extreme exponents should stay in log form.
    double value() const { return zero ? 0.0 : std::exp(log_value); }
};

// log(a + b) for log-form nonnegative scalars.
inline LogNonneg log_add(LogNonneg a, LogNonneg b) {
    if (a.zero) return b;
    if (b.zero) return a;
    double hi = std::max(a.log_value, b.log_value);
    double lo = std::min(a.log_value, b.log_value);
    return LogNonneg::from_log(hi + std::log1p(std::exp(lo - hi)));
}

// c * a with c > 0.
inline LogNonneg log_scale(LogNonneg a, double c) {
    if (a.zero || c <= 0.0) return a.zero || c == 0.0 ? LogNonneg{} : a;
    return LogNonneg::from_log(a.log_value + std::log(c));
}

inline bool nearly_equal(double a, double b, double rel_tol, double abs_tol = 0.0) {
    double diff = std::abs(a - b);
    return diff <= abs_tol || diff <= rel_tol * std::max(std::abs(a), std::abs(b));
}

} // namespace plapmix
