#pragma once

#include "polyostat/families.hpp"
#include "polyostat/jet.hpp"
#include "polyostat/prec.hpp"
#include "polyostat/theta.hpp"

#include <optional>
#include <stdexcept>
#include <utility>

namespace polyostat {

// Truncation orders shared by the whole analytic pipeline.
//   J_max: outer terms kept in each q-series sum,
//   L_max: theta-coefficient truncation,
//   K_max: column-size cap for chains and weight vectors.
// Tails decay at least geometrically with ratio rho < 0.6.
struct KernelModel {
    int J_max = 16;
    int L_max = 60;
    int K_max = 80;
};

// Deep model for the converged moment pipeline. The q-series that enter
// amplitude numerators decay like plain powers of rho, so the default
// J_max is far from enough for 10-digit chain statistics.
inline KernelModel deep_model() { return KernelModel{160, 60, 80}; }

struct SeriesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
// Non-convergence gate: the last retained term of a truncated series must
// be negligible against the largest term seen.
inline void check_tail(double last, double scale, const char* what) {
    if (last > 1e-10 * (scale > 1.0 ? scale : 1.0))
        throw SeriesError(std::string(what) + ": series not converged at J_max");
}
}  // namespace detail

template <class S>
S q_pochhammer(const S& a, const S& z, int n) {
    S p{1};
    S azr = a;
    for (int r = 0; r < n; ++r) {
        p = p * (S{1} - azr);
        azr = azr * z;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Escalier continued-fraction machinery.
// P_n = P_{n-1} - z^n x P_{n-2}, same recursion for Q_n;
// P_{-1}=0, P_0=Q_{-1}=Q_0=1.
// ---------------------------------------------------------------------------

template <class S>
std::pair<S, S> escalier_convergents(int n, const S& x, const S& z) {
    S pm2{0}, pm1{1};
    S qm2{1}, qm1{1};
    S zr{1};
    for (int r = 1; r <= n; ++r) {
        zr = zr * z;
        S p = pm1 - zr * x * pm2;
        S q = qm1 - zr * x * qm2;
        pm2 = pm1;
        pm1 = p;
        qm2 = qm1;
        qm1 = q;
    }
    return {pm1, qm1};
}

template <class S>
S es_Q(const S& x, const S& z, int terms) {
    // sum_k (-1)^k z^{k^2} x^k / (z;z)_k, built incrementally:
    // t_k = t_{k-1} * (-z^{2k-1} x / (1 - z^k)).
    S sum{1}, term{1};
    S z2k1 = z;        // z^{2k-1}
    S zk = z;          // z^k
    double peak = mag(sum), last = 0.0;
    for (int k = 1; k < terms; ++k) {
        term = term * (-(z2k1 * x) / (S{1} - zk));
        sum = sum + term;
        last = mag(term);
        if (last > peak) peak = last;
        if (last < 1e-38 * peak) return sum;
        z2k1 = z2k1 * z * z;
        zk = zk * z;
    }
    detail::check_tail(last, peak, "es_Q");
    return sum;
}

template <class S>
S es_P(const S& x, const S& z, int terms) {
    // sum_k (-1)^k z^{k^2+k} x^k / (z;z)_k.
    S sum{1}, term{1};
    S z2k = z * z;     // z^{2k}
    S zk = z;
    double peak = mag(sum), last = 0.0;
    for (int k = 1; k < terms; ++k) {
        term = term * (-(z2k * x) / (S{1} - zk));
        sum = sum + term;
        last = mag(term);
        if (last > peak) peak = last;
        if (last < 1e-38 * peak) return sum;
        z2k = z2k * z * z;
        zk = zk * z;
    }
    detail::check_tail(last, peak, "es_P");
    return sum;
}

// Convergent denominator Q_n(x,z); Q_{-1} = Q_0 = 1.
template <class S>
S es_Qn(int n, const S& x, const S& z) {
    if (n <= 0) return S{1};
    return escalier_convergents(n, x, z).second;
}

// ---------------------------------------------------------------------------
// Family kernels h(w,z) and resolved numerators.
// ---------------------------------------------------------------------------

namespace detail {

template <class S>
S h_dcc(const S& w, const S& z) {
    return -z * z + S{2} * z + z * w - S{1};
}

template <class S>
S h_cc(const S& w, const S& z) {
    S z2 = z * z, z3 = z2 * z, z4 = z3 * z;
    return z4 * (w - S{1}) + z3 * (w * w - w + S{4}) - z2 * (w + S{6}) +
           z * (w + S{4}) - S{1};
}

template <class S>
S h_wa(const S& w, const S& z) {
    return S{1} - z - w * z;
}

template <class S>
S h_st(const S& w, const S& z, int J) {
    // 1 - sum_j xi^{j+1} (-1)^j z^{j(j+1)/2} / ((z;z)_j^2 (1-z^{j+1})^2).
    S xi = z * w;
    S sum{0};
    double peak = 0.0, last = 0.0;
    for (int j = 0; j < J; ++j) {
        S t = pow_int(xi, j + 1) * pow_int(z, j * (j + 1) / 2) /
              (pow_int(q_pochhammer(z, z, j), 2) *
               pow_int(S{1} - pow_int(z, j + 1), 2));
        if (j % 2) t = -t;
        sum = sum + t;
        last = mag(t);
        if (last > peak) peak = last;
        if (last < 1e-38 * (peak > 1 ? peak : 1.0)) break;
    }
    check_tail(last, peak, "h_st");
    return S{1} - sum;
}

// dc slice functions; t is the theta-like argument z^j inside the nested sums.
template <class S>
S dc_f1p(const S& t, const S& z) {
    return z * (S{1} - S{3} * t * z) / pow_int(S{1} - t * z, 3);
}
template <class S>
S dc_f2p(const S& t, const S& z) {
    return z / pow_int(S{1} - t * z, 2);
}
template <class S>
S dc_f3p(const S& t, const S& z) {
    return t * t * z * z * z * (S{3} - t * z) / pow_int(S{1} - t * z, 3);
}

template <class S>
S dc_A1(const S& xi, const S& th, const S& z, int i, int J) {
    S sum{0};
    for (int j = 0; j < J; ++j) {
        sum = sum + pow_int(xi, j + 1) * pow_int(th, 3 * j) *
                        pow_int(z, 3 * j * (j + 1) / 2) * pow_int(th, i - 1) *
                        pow_int(z, (i - 1) * (j + 1)) /
                        pow_int(q_pochhammer(th * z, z, j), 2);
    }
    return sum;
}

template <class S>
S dc_B11(const S& xi, const S& th, const S& z, int J) {
    S sum{0};
    for (int j = 0; j < J; ++j) {
        S thz = th * pow_int(z, j + 1);
        sum = sum + pow_int(xi, j + 1) * pow_int(th, 3 * j) *
                        pow_int(z, 3 * j * (j + 1) / 2) /
                        pow_int(q_pochhammer(th * z, z, j), 2) *
                        (S{2} - S{3} * thz) / pow_int(S{1} - thz, 2);
    }
    return sum;
}

template <class S>
S dc_B12(const S& xi, const S& th, const S& z, int J) {
    S sum{0};
    for (int j = 0; j < J; ++j) {
        S thz = th * pow_int(z, j + 1);
        sum = sum + pow_int(xi, j + 1) * pow_int(th, 3 * j) *
                        pow_int(z, 3 * j * (j + 1) / 2) /
                        pow_int(q_pochhammer(th * z, z, j), 2) /
                        (S{1} - thz);
    }
    return sum;
}

template <class S>
S dc_A2t(const S& xi, const S& z, int i, int J) {
    S sum{0};
    for (int j = 0; j < J; ++j) {
        S zj = pow_int(z, j);
        S base = pow_int(xi, j + 1) * zj * pow_int(z, 3 * j * (j + 1) / 2) /
                 pow_int(q_pochhammer(z, z, j), 2);
        sum = sum + base * dc_f3p(zj, z) * dc_A1(xi, pow_int(z, j + 1), z, i, J);
        if (i >= 2)
            sum = sum + base * S(i - 1) * pow_int(z, (i - 2) * j) *
                            pow_int(z, i - 1);
    }
    return sum;
}

template <class S>
S dc_B21t(const S& xi, const S& z, int J) {
    S sum{0};
    for (int j = 0; j < J; ++j) {
        S zj = pow_int(z, j);
        S base = pow_int(xi, j + 1) * zj * pow_int(z, 3 * j * (j + 1) / 2) /
                 pow_int(q_pochhammer(z, z, j), 2);
        sum = sum + base * (dc_f1p(zj, z) +
                            dc_f3p(zj, z) * dc_B11(xi, pow_int(z, j + 1), z, J));
    }
    return sum;
}

template <class S>
S dc_B22t(const S& xi, const S& z, int J) {
    S sum{0};
    for (int j = 0; j < J; ++j) {
        S zj = pow_int(z, j);
        S base = pow_int(xi, j + 1) * zj * pow_int(z, 3 * j * (j + 1) / 2) /
                 pow_int(q_pochhammer(z, z, j), 2);
        sum = sum + base * (dc_f2p(zj, z) +
                            dc_f3p(zj, z) * dc_B12(xi, pow_int(z, j + 1), z, J));
    }
    return sum;
}

template <class S>
S h_dc(const S& w, const S& z, int J) {
    S xi = z * w;
    S b11 = dc_B11(xi, S{1}, z, J), b12 = dc_B12(xi, S{1}, z, J);
    S b21 = dc_B21t(xi, z, J), b22 = dc_B22t(xi, z, J);
    return b12 * b21 - b22 * b11 + b22 + b11 - S{1};
}

}  // namespace detail

template <class S>
S kernel_h(FamilyId id, const S& w, const S& z, const KernelModel& m = {}) {
    switch (id) {
        case FamilyId::dcc: return detail::h_dcc(w, z);
        case FamilyId::cc: return detail::h_cc(w, z);
        case FamilyId::wa: return detail::h_wa(w, z);
        case FamilyId::st: return detail::h_st(w, z, m.J_max);
        case FamilyId::dc: return detail::h_dc(w, z, m.J_max);
        case FamilyId::es: return es_Q(w, z, m.J_max);
    }
    throw std::logic_error("bad family");
}

namespace detail {

template <class S>
S n1_dcc(const S& w, const S& z, int i) {
    return z * w *
           (-z * z + z * z * w * S(i) + S{2} * z - z * w * S(i) - S{1} + z * w) *
           pow_int(z, i - 1);
}

template <class S>
S n2_dcc(const S& w, const S& z, int i) {
    return -pow_int(z, i - 1) * z * w *
           (S(i) * z * z - S(2 * i) * z + S{2} * z + S(i) - S{1} - z * z +
            z * z * w * S(i) - z * w * S(i) + z * w);
}

template <class S>
S n1_cc(const S& w, const S& z, int i) {
    return w * pow_int(z, i) * pow_int(z - S{1}, 2) *
           (z * z * w * S(i) - z * z + z * w - z * w * S(i) + S{2} * z - S{1});
}

template <class S>
S n2_cc(const S& w, const S& z, int i) {
    S b = -S(i) * pow_int(z, 3) + pow_int(z, 3) - S{3} * z * z + z * z * w +
          S(3 * i) * z * z + z * z * w * S(i) - z * w * S(i) - S(3 * i) * z +
          S{3} * z + z * w + S(i) - S{1};
    return (z - S{1}) * b * w * pow_int(z, i);
}

template <class S>
S n1_wa(const S& w, const S& z, int i) {
    return w * pow_int(z, i) * (S{1} - z);
}

template <class S>
S n1_st(const S& w, const S& z, int i, int J) {
    S xi = z * w;
    S sum{0};
    for (int j = 0; j < J; ++j) {
        S t = pow_int(xi, j + 1) * pow_int(z, j * (j + 1) / 2) *
              pow_int(z, (i - 1) * (j + 1)) /
              pow_int(q_pochhammer(z, z, j), 2);
        if (j % 2) t = -t;
        sum = sum + t;
    }
    return sum;
}

template <class S>
S n1_dc(const S& w, const S& z, int i, int J) {
    S xi = z * w;
    S a1 = dc_A1(xi, S{1}, z, i, J);
    S a2 = dc_A2t(xi, z, i, J);
    S b12 = dc_B12(xi, S{1}, z, J), b22 = dc_B22t(xi, z, J);
    return -a1 + b22 * a1 - b12 * a2;
}

template <class S>
S n2_dc(const S& w, const S& z, int i, int J) {
    S xi = z * w;
    S a1 = dc_A1(xi, S{1}, z, i, J);
    S a2 = dc_A2t(xi, z, i, J);
    S b11 = dc_B11(xi, S{1}, z, J), b21 = dc_B21t(xi, z, J);
    return b11 * a2 - a2 - b21 * a1;
}

// es numerator S(w,z,i): a finite staircase prefix plus a tail sum whose
// terms decay like z^n; the tail keeps J terms starting at n = i-1.
template <class S>
S n1_es(const S& w, const S& z, int i, int J) {
    S s{0};
    for (int n = 0; n <= i - 2; ++n) {
        s = s + pow_int(z, i * (i - 1) / 2 - n * (n + 1) / 2) *
                    pow_int(w, i - 1 - n) * es_Qn(n, w, z) *
                    es_Q(pow_int(z, i) * w, z, J);
    }
    S qfix = es_Qn(i - 2, w, z);
    S t{0};
    for (int n = i - 1; n < i - 1 + J; ++n) {
        t = t + pow_int(z, n + 1) * w * qfix * es_Q(pow_int(z, n + 2) * w, z, J);
    }
    return w * pow_int(z, i) * (s + t);
}

}  // namespace detail

// First-column-size-i numerator of the resolved slice system.
template <class S>
S kernel_n1(FamilyId id, const S& w, const S& z, int i,
            const KernelModel& m = {}) {
    switch (id) {
        case FamilyId::dcc: return detail::n1_dcc(w, z, i);
        case FamilyId::cc: return detail::n1_cc(w, z, i);
        case FamilyId::wa: return detail::n1_wa(w, z, i);
        case FamilyId::st: return detail::n1_st(w, z, i, m.J_max);
        case FamilyId::dc: return detail::n1_dc(w, z, i, m.J_max);
        case FamilyId::es: return detail::n1_es(w, z, i, m.J_max);
    }
    throw std::logic_error("bad family");
}

// Second numerator where the slice system has two unknowns.
template <class S>
std::optional<S> kernel_n2(FamilyId id, const S& w, const S& z, int i,
                           const KernelModel& m = {}) {
    switch (id) {
        case FamilyId::dcc: return detail::n2_dcc(w, z, i);
        case FamilyId::cc: return detail::n2_cc(w, z, i);
        case FamilyId::dc: return detail::n2_dc(w, z, i, m.J_max);
        default: return std::nullopt;
    }
}

// Numerator aggregated over the first column size (closed forms where the
// geometric i-sums collapse; es keeps no closed form and sums to K_max).
template <class S>
S kernel_n1_any(FamilyId id, const S& w, const S& z,
                const KernelModel& m = {}) {
    switch (id) {
        case FamilyId::dcc: return z * w * (z - S{1});
        case FamilyId::cc: return w * z * pow_int(z - S{1}, 3);
        case FamilyId::wa: return w * z;
        case FamilyId::st: {
            S xi = z * w;
            S sum{0};
            for (int j = 0; j < m.J_max; ++j) {
                S t = pow_int(xi, j + 1) * pow_int(z, j * (j + 1) / 2) /
                      (pow_int(q_pochhammer(z, z, j), 2) *
                       (S{1} - pow_int(z, j + 1)));
                if (j % 2) t = -t;
                sum = sum + t;
            }
            return sum;
        }
        case FamilyId::dc: {
            // i-sums of A1 and A2 collapse into 1/(1-z^{j+1}) factors.
            S xi = z * w;
            S a1{0}, a2{0};
            for (int j = 0; j < m.J_max; ++j) {
                S zj1 = pow_int(z, j + 1);
                S t = pow_int(xi, j + 1) * pow_int(z, 3 * j * (j + 1) / 2) /
                      pow_int(q_pochhammer(z, z, j), 2);
                a1 = a1 + t / (S{1} - zj1);
                S inner{0};
                for (int mm = 0; mm < m.J_max; ++mm) {
                    inner = inner + pow_int(xi, mm + 1) * pow_int(zj1, 3 * mm) *
                                        pow_int(z, 3 * mm * (mm + 1) / 2) /
                                        pow_int(q_pochhammer(zj1 * z, z, mm), 2) /
                                        (S{1} - zj1 * pow_int(z, mm + 1));
                }
                S zj = pow_int(z, j);
                S base = pow_int(xi, j + 1) * zj *
                         pow_int(z, 3 * j * (j + 1) / 2) /
                         pow_int(q_pochhammer(z, z, j), 2);
                a2 = a2 + base * detail::dc_f3p(zj, z) * inner;
                a2 = a2 + base * z / pow_int(S{1} - zj1, 2);
            }
            S b12 = detail::dc_B12(xi, S{1}, z, m.J_max);
            S b22 = detail::dc_B22t(xi, z, m.J_max);
            return -a1 + b22 * a1 - b12 * a2;
        }
        case FamilyId::es: {
            S sum{0};
            for (int i = 1; i <= m.K_max; ++i)
                sum = sum + detail::n1_es(w, z, i, m.J_max);
            return sum;
        }
    }
    throw std::logic_error("bad family");
}

// ---------------------------------------------------------------------------
// Theta series of the slice generating function phi(w,theta,z,i), following
// each family's own normalization (some displays carry a 1/w).
// Returned at an arbitrary w0 as first-order jets in w.
// ---------------------------------------------------------------------------

namespace detail {

template <class S>
Jet1<S> wpow(const S& w0, int p) {
    if (p == 0) return Jet1<S>{S{1}, S{0}};
    return Jet1<S>{pow_int(w0, p), S(p) * pow_int(w0, p - 1)};
}

// f(w)/w as a jet at w0.
template <class S>
Jet1<S> divw(const Jet1<S>& a, const S& w0) {
    return {a.v / w0, (a.d * w0 - a.v) / (w0 * w0)};
}

template <class S>
ThetaSeries<Jet1<S>> theta_phi_at(FamilyId id, const S& w0, const S& z, int i,
                                  const KernelModel& m) {
    const int L = m.L_max;
    ThetaSeries<Jet1<S>> out(L);
    Jet1<S> wj = Jet1<S>::variable(w0);
    Jet1<S> zc{z};

    switch (id) {
        case FamilyId::dcc: {
            Jet1<S> tot = n1_dcc(wj, zc, i) + n2_dcc(wj, zc, i);
            S zl{1};
            for (int l = 1; l <= L; ++l) {
                zl = zl * z;
                out[l] = Jet1<S>{zl * tot.v, zl * tot.d};
            }
            return out;
        }
        case FamilyId::cc: {
            Jet1<S> a = n1_cc(wj, zc, i);
            Jet1<S> b = n2_cc(wj, zc, i);
            S zl{1};
            for (int l = 1; l <= L; ++l) {
                zl = zl * z;
                out[l] = Jet1<S>{zl * (S(l) * a.v + b.v),
                                 zl * (S(l) * a.d + b.d)};
            }
            return out;
        }
        case FamilyId::wa: {
            for (int l = 1; l <= L; ++l) {
                S c = pow_int(z, i + l) * (S{1} - z);
                out[l] = Jet1<S>{w0 * c, c};
            }
            return out;
        }
        case FamilyId::st: {
            ThetaSeries<Jet1<S>> acc(L);
            for (int j = 0; j < m.J_max && j + 1 <= L; ++j) {
                ThetaSeries<S> ser(L);
                ser[0] = S{1};
                for (int r = 1; r <= j; ++r) {
                    S zr = pow_int(z, r);
                    ser.div_geom(zr);
                    ser.div_geom(zr);
                }
                S zj1 = pow_int(z, j + 1);
                ser.div_geom(zj1);
                ser.div_geom(zj1);
                S c = pow_int(z, (j + 1) + j * (j + 1) / 2);
                if (j % 2) c = -c;
                Jet1<S> wp = wpow(w0, j + 1);
                for (int t = 0; j + t + 1 <= L; ++t) {
                    S f = c * ser[t];
                    acc[j + t + 1] = acc[j + t + 1] + Jet1<S>{wp.v * f, wp.d * f};
                }
            }
            Jet1<S> n1 = n1_st(wj, zc, i, m.J_max);
            for (int l = 0; l <= L; ++l) out[l] = divw(acc[l] * n1, w0);
            return out;
        }
        case FamilyId::dc: {
            ThetaSeries<Jet1<S>> acc11(L), acc12(L);
            for (int j = 0; j < m.J_max && 3 * j + 1 <= L; ++j) {
                S zj1 = pow_int(z, j + 1);
                ThetaSeries<S> ser(L);
                ser[0] = S{2};
                ser[1] = S{-3} * zj1;
                ThetaSeries<S> ser12(L);
                ser12[0] = S{1};
                for (int r = 1; r <= j; ++r) {
                    S zr = pow_int(z, r);
                    ser.div_geom(zr);
                    ser.div_geom(zr);
                    ser12.div_geom(zr);
                    ser12.div_geom(zr);
                }
                ser.div_geom(zj1);
                ser.div_geom(zj1);
                ser12.div_geom(zj1);
                S c = zj1 * pow_int(z, 3 * j * (j + 1) / 2);
                Jet1<S> wp = wpow(w0, j + 1);
                for (int t = 0; 3 * j + t + 1 <= L; ++t) {
                    S f = c * ser[t];
                    acc11[3 * j + t + 1] =
                        acc11[3 * j + t + 1] + Jet1<S>{wp.v * f, wp.d * f};
                    S f12 = c * ser12[t];
                    acc12[3 * j + t + 1] =
                        acc12[3 * j + t + 1] + Jet1<S>{wp.v * f12, wp.d * f12};
                }
            }
            Jet1<S> a = n1_dc(wj, zc, i, m.J_max);
            Jet1<S> b = n2_dc(wj, zc, i, m.J_max);
            for (int l = 0; l <= L; ++l)
                out[l] = divw(acc11[l] * a + acc12[l] * b, w0);
            return out;
        }
        case FamilyId::es: {
            Jet1<S> qfix = es_Qn(i - 2, wj, zc);
            for (int n = 0; n + 1 <= L; ++n) {
                Jet1<S> term;
                if (n <= i - 2) {
                    S c = pow_int(z, i) *
                          pow_int(z, i * (i - 1) / 2 - n * (n + 1) / 2);
                    Jet1<S> qn = es_Qn(n, wj, zc);
                    Jet1<S> qq = es_Q(Jet1<S>{pow_int(z, i)} * wj, zc, m.J_max);
                    term = wpow(w0, i - 1 - n) * qn * qq;
                    term = Jet1<S>{term.v * c, term.d * c};
                } else {
                    S c = pow_int(z, i) * pow_int(z, n + 1);
                    Jet1<S> qq =
                        es_Q(Jet1<S>{pow_int(z, n + 2)} * wj, zc, m.J_max);
                    term = wj * qfix * qq;
                    term = Jet1<S>{term.v * c, term.d * c};
                }
                out[n + 1] = term;
            }
            return out;
        }
    }
    throw std::logic_error("bad family");
}

}  // namespace detail

// Value and w-derivative theta series of phi(w,theta,z,i)/w at w = 1
// (the /w normalization is family-specific and matches the slice displays).
template <class S>
std::pair<ThetaSeries<S>, ThetaSeries<S>> theta_phi(FamilyId id, const S& z,
                                                    int i,
                                                    const KernelModel& m = {}) {
    auto jets = detail::theta_phi_at(id, S{1}, z, i, m);
    ThetaSeries<S> val(m.L_max), der(m.L_max);
    for (int l = 0; l <= m.L_max; ++l) {
        val[l] = jets[l].v;
        der[l] = jets[l].d;
    }
    return {std::move(val), std::move(der)};
}

// Direct-path theta series: the same-column pairing part of the lag sums.
// A Kronecker spike for the families whose slice GF has a unique direct
// channel, a genuine series for st and dc.
template <class S>
ThetaSeries<S> theta_m1(FamilyId id, const S& z, int i,
                        const KernelModel& m = {}) {
    const int L = m.L_max;
    ThetaSeries<S> out(L);
    switch (id) {
        case FamilyId::dcc:
        case FamilyId::cc:
        case FamilyId::wa:
        case FamilyId::es:
            if (i <= L) out[i] = pow_int(z, i);
            return out;
        case FamilyId::st: {
            for (int j = 0; j < m.J_max; ++j) {
                if (1 + j + (i - 1) > L) break;
                ThetaSeries<S> ser(L);
                ser[0] = S{1};
                for (int r = 1; r <= j; ++r) {
                    S zr = pow_int(z, r);
                    ser.div_geom(zr);
                    ser.div_geom(zr);
                }
                S c = pow_int(z, (j + 1) + j * (j + 1) / 2 +
                                     (i - 1) * (j + 1));
                if (j % 2) c = -c;
                for (int t = 0; 1 + j + (i - 1) + t <= L; ++t)
                    out[1 + j + (i - 1) + t] =
                        out[1 + j + (i - 1) + t] + c * ser[t];
            }
            return out;
        }
        case FamilyId::dc: {
            for (int j = 0; j < m.J_max; ++j) {
                if (1 + 3 * j + (i - 1) > L) break;
                ThetaSeries<S> ser(L);
                ser[0] = S{1};
                for (int r = 1; r <= j; ++r) {
                    S zr = pow_int(z, r);
                    ser.div_geom(zr);
                    ser.div_geom(zr);
                }
                S c = pow_int(z, (j + 1) + 3 * j * (j + 1) / 2 +
                                     (i - 1) * (j + 1));
                for (int t = 0; 1 + 3 * j + (i - 1) + t <= L; ++t)
                    out[1 + 3 * j + (i - 1) + t] =
                        out[1 + 3 * j + (i - 1) + t] + c * ser[t];
            }
            return out;
        }
    }
    throw std::logic_error("bad family");
}

}  // namespace polyostat
