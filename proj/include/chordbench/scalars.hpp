#pragma once

// Scalar abstraction: every algorithm in this library is templated on the
// coordinate type S, which is either mpq_class (exact rational mode) or
// double (float mode).  scalar_traits centralizes the few places where the
// two modes genuinely differ: threshold comparisons, parsing, printing.

#include <gmpxx.h>

#include <optional>
#include <string>

#include "chordbench/errors.hpp"

namespace chordbench {

using rational = mpq_class;

// Absolute slack used in float mode whenever a computed metric value is
// compared against an error bound.  Ordering comparisons (argmin scans,
// sorting) are always raw.  Mutable on purpose: a couple of tests tighten it.
double& float_tolerance();

// Exact parsing/printing helpers for rationals.  Accepted input forms:
// "p/q", plain integers, and decimal/scientific literals ("0.25", "1e-4"),
// all converted exactly.  Output is canonical "p/q", or just "p" when the
// denominator is 1.
std::optional<rational> parse_rational(const std::string& text);
std::string format_rational(const rational& value);

// Largest rational t/ (2^bits * den-ish grid) with t^2 <= value; used where a
// square root has to be reported (or conservatively rounded) in exact mode.
rational rational_sqrt_down(const rational& value, unsigned bits = 60);

std::optional<double> parse_double(const std::string& text);
std::string format_double(double value);  // shortest round-trip form

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<rational> {
    static constexpr bool exact = true;
    static const char* mode_name() { return "rational"; }

    // value <= bound, used for metric-vs-epsilon decisions.
    static bool within(const rational& value, const rational& bound) { return value <= bound; }

    static std::string format(const rational& v) { return format_rational(v); }
    static std::optional<rational> parse(const std::string& s) { return parse_rational(s); }
    static double to_double(const rational& v) { return v.get_d(); }
    static rational from_long(long v) { return rational(v); }
    static rational sqrt_down(const rational& v) { return rational_sqrt_down(v); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static const char* mode_name() { return "float"; }

    static bool within(double value, double bound) { return value <= bound + float_tolerance(); }

    static std::string format(double v) { return format_double(v); }
    static std::optional<double> parse(const std::string& s) { return parse_double(s); }
    static double to_double(double v) { return v; }
    static double from_long(long v) { return static_cast<double>(v); }
    static double sqrt_down(double v);
};

// A comb query slope: a value in [0, +inf].  +inf asks for the leftmost
// point, 0 for the lowest.
template <class S>
struct query_slope {
    S value{};
    bool infinite = false;

    static query_slope infinity() { return {S{}, true}; }
    static query_slope finite(const S& v) { return {v, false}; }

    bool is_zero() const { return !infinite && value == 0; }

    friend bool operator==(const query_slope& a, const query_slope& b) {
        if (a.infinite || b.infinite) return a.infinite == b.infinite;
        return a.value == b.value;
    }
    // total order with +inf on top
    friend bool operator<(const query_slope& a, const query_slope& b) {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.value < b.value;
    }
};

template <class S>
std::string format_slope(const query_slope<S>& s) {
    return s.infinite ? "inf" : scalar_traits<S>::format(s.value);
}

}  // namespace chordbench
