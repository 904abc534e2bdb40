#pragma once

#include "polyostat/prec.hpp"

#include <complex>

namespace polyostat {

// First-order jet: value and one derivative. Used to differentiate the
// kernels analytically in a single pass (in w for the amplitude series, in
// z for Newton polishing of the root).
template <class S>
struct Jet1 {
    S v{0};
    S d{0};

    Jet1() = default;
    Jet1(S value) : v(std::move(value)), d(0) {}
    Jet1(S value, S deriv) : v(std::move(value)), d(std::move(deriv)) {}

    static Jet1 variable(S x) { return {std::move(x), S{1}}; }

    friend Jet1 operator+(const Jet1& a, const Jet1& b) {
        return {a.v + b.v, a.d + b.d};
    }
    friend Jet1 operator-(const Jet1& a, const Jet1& b) {
        return {a.v - b.v, a.d - b.d};
    }
    friend Jet1 operator-(const Jet1& a) { return {-a.v, -a.d}; }
    friend Jet1 operator*(const Jet1& a, const Jet1& b) {
        return {a.v * b.v, a.v * b.d + a.d * b.v};
    }
    friend Jet1 operator/(const Jet1& a, const Jet1& b) {
        S q = a.v / b.v;
        return {q, (a.d - q * b.d) / b.v};
    }
    Jet1& operator+=(const Jet1& o) { return *this = *this + o; }
    Jet1& operator-=(const Jet1& o) { return *this = *this - o; }
    Jet1& operator*=(const Jet1& o) { return *this = *this * o; }
    Jet1& operator/=(const Jet1& o) { return *this = *this / o; }
};

// Second-order bivariate jet in (w,z). Carries enough to read off
// h_w, h_z, h_ww, h_wz, h_zz from one kernel evaluation.
template <class S>
struct Jet2 {
    S v{0}, dw{0}, dz{0}, dww{0}, dwz{0}, dzz{0};

    Jet2() = default;
    Jet2(S value) : v(std::move(value)) {}

    static Jet2 var_w(S x) {
        Jet2 j(std::move(x));
        j.dw = S{1};
        return j;
    }
    static Jet2 var_z(S x) {
        Jet2 j(std::move(x));
        j.dz = S{1};
        return j;
    }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.v = a.v + b.v;
        r.dw = a.dw + b.dw;
        r.dz = a.dz + b.dz;
        r.dww = a.dww + b.dww;
        r.dwz = a.dwz + b.dwz;
        r.dzz = a.dzz + b.dzz;
        return r;
    }
    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.v = a.v - b.v;
        r.dw = a.dw - b.dw;
        r.dz = a.dz - b.dz;
        r.dww = a.dww - b.dww;
        r.dwz = a.dwz - b.dwz;
        r.dzz = a.dzz - b.dzz;
        return r;
    }
    friend Jet2 operator-(const Jet2& a) { return Jet2{} - a; }
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.v = a.v * b.v;
        r.dw = a.v * b.dw + a.dw * b.v;
        r.dz = a.v * b.dz + a.dz * b.v;
        r.dww = a.v * b.dww + S{2} * a.dw * b.dw + a.dww * b.v;
        r.dwz = a.v * b.dwz + a.dw * b.dz + a.dz * b.dw + a.dwz * b.v;
        r.dzz = a.v * b.dzz + S{2} * a.dz * b.dz + a.dzz * b.v;
        return r;
    }
    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        Jet2 q;
        q.v = a.v / b.v;
        q.dw = (a.dw - q.v * b.dw) / b.v;
        q.dz = (a.dz - q.v * b.dz) / b.v;
        q.dww = (a.dww - S{2} * q.dw * b.dw - q.v * b.dww) / b.v;
        q.dwz = (a.dwz - q.dw * b.dz - q.dz * b.dw - q.v * b.dwz) / b.v;
        q.dzz = (a.dzz - S{2} * q.dz * b.dz - q.v * b.dzz) / b.v;
        return q;
    }
    Jet2& operator+=(const Jet2& o) { return *this = *this + o; }
    Jet2& operator-=(const Jet2& o) { return *this = *this - o; }
    Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
    Jet2& operator/=(const Jet2& o) { return *this = *this / o; }
};

inline double mag(const std::complex<double>& v) { return std::abs(v); }
template <class S>
double mag(const Jet1<S>& j) {
    return mag(j.v);
}
template <class S>
double mag(const Jet2<S>& j) {
    return mag(j.v);
}

}  // namespace polyostat
