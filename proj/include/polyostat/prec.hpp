#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <string>

namespace polyostat {

// Working scalar for the spectral and moment pipelines. Quad-style binary
// float, 113 mantissa bits (~34 decimal digits), plain-value semantics so it
// composes with the jet types below.
using Ext = boost::multiprecision::number<
    boost::multiprecision::backends::cpp_bin_float<
        113, boost::multiprecision::backends::digit_base_2, void,
        std::int32_t, -16382, 16383>,
    boost::multiprecision::et_off>;

enum class Profile { extended, dbl };

// POLYOSTAT_PRECISION=double selects the double profile; anything else
// (including unset) selects extended. Read once per process.
Profile precision_profile();
const char* profile_name(Profile p);

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static double from_int(long v) { return static_cast<double>(v); }
    static double to_double(double v) { return v; }
    static double abs(double v) { return std::fabs(v); }
    static double sqrt(double v) { return std::sqrt(v); }
    static constexpr const char* name = "double";
};

template <>
struct scalar_traits<Ext> {
    static Ext from_int(long v) { return Ext(v); }
    static double to_double(const Ext& v) { return v.convert_to<double>(); }
    static Ext abs(const Ext& v) { return boost::multiprecision::fabs(v); }
    static Ext sqrt(const Ext& v) { return boost::multiprecision::sqrt(v); }
    static constexpr const char* name = "extended";
};

template <class S>
S pow_int(S base, long e) {
    // e >= 0 only; the series code never needs negative powers.
    S r{1};
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

inline double to_double(double v) { return v; }
inline double to_double(const Ext& v) { return v.convert_to<double>(); }

// Magnitude of the value part, used by series convergence checks.
inline double mag(double v) { return std::fabs(v); }
inline double mag(const Ext& v) {
    return std::fabs(v.convert_to<double>());
}

}  // namespace polyostat
