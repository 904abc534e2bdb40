#include "polyostat/spectral.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>

namespace polyostat {

namespace {

template <class S>
const SpectralCore<S>& cached_core(FamilyId id) {
    static std::array<std::once_flag, kFamilyCount> flags;
    static std::array<std::unique_ptr<SpectralCore<S>>, kFamilyCount> cores;
    auto k = static_cast<std::size_t>(id);
    std::call_once(flags[k], [&] {
        cores[k] = std::make_unique<SpectralCore<S>>(
            build_spectral_core<S>(id, deep_model(id)));
    });
    return *cores[k];
}

}  // namespace

const SpectralCore<Ext>& spectral_core(FamilyId id) {
    return cached_core<Ext>(id);
}
const SpectralCore<double>& spectral_core_d(FamilyId id) {
    return cached_core<double>(id);
}

SpectralConstants spectral_constants(FamilyId id) {
    SpectralConstants out{};
    auto fill = [&out](const auto& c) {
        out.rho = to_double(c.rho);
        out.hw = to_double(c.hw);
        out.hz = to_double(c.hz);
        out.hww = to_double(c.hww);
        out.hwz = to_double(c.hwz);
        out.hzz = to_double(c.hzz);
        out.r1 = to_double(c.r1);
        out.r2 = to_double(c.r2);
        out.mu1 = to_double(c.mu1);
        out.sigma1_sq = to_double(c.sigma1_sq);
        out.mu2 = to_double(c.mu2);
        out.sigma2_sq = to_double(c.sigma2_sq);
        out.c1 = to_double(c.c1);
        out.c2_first = to_double(c.c2_first);
        out.c2_total = to_double(c.c2_total);
    };
    if (precision_profile() == Profile::dbl)
        fill(spectral_core_d(id));
    else
        fill(spectral_core(id));
    return out;
}

std::vector<double> c2_weights(FamilyId id) {
    std::vector<double> out;
    auto fill = [&out](const auto& c) {
        out.resize(c.c2.size());
        for (std::size_t j = 0; j < c.c2.size(); ++j) out[j] = to_double(c.c2[j]);
    };
    if (precision_profile() == Profile::dbl)
        fill(spectral_core_d(id));
    else
        fill(spectral_core(id));
    return out;
}

RootCheck verify_dominant_root(FamilyId id, int points, double radius_factor) {
    if (points < 4096) points = 4096;
    using C = std::complex<double>;
    const double rho = to_double(spectral_core(id).rho);
    const double r = rho * radius_factor;
    const double pi = 3.14159265358979323846;
    KernelModel m;

    RootCheck chk{true, 0, points, r};
    C prev = kernel_h(id, C{1.0}, C{r, 0.0}, m);
    double total = 0.0;
    for (int k = 1; k <= points; ++k) {
        C z = std::polar(r, 2.0 * pi * k / points);
        C cur = kernel_h(id, C{1.0}, z, m);
        double inc = std::arg(cur / prev);
        if (std::fabs(inc) > pi / 2.0) chk.conclusive = false;
        total += inc;
        prev = cur;
    }
    chk.winding = static_cast<int>(std::lround(total / (2.0 * pi)));
    return chk;
}

// ---------------------------------------------------------------------------
// Known area-perimeter generating functions. v marks half-perimeter, z area;
// the dominant singularity curve r(v) carries the perimeter law.
// ---------------------------------------------------------------------------

namespace {

constexpr int kGfTerms = 16;

Ext gf_value(FamilyId id, const Ext& v, const Ext& z) {
    const Ext one{1};
    switch (id) {
        case FamilyId::dcc: {
            Ext sum{0};
            for (int n = 1; n <= kGfTerms; ++n) {
                sum += pow_int(v, n) * pow_int(v - one, n - 1) *
                       pow_int(z, n * (n + 1) / 2) /
                       (q_pochhammer(z, z, n) * q_pochhammer(v * z, z, n - 1) *
                        q_pochhammer(v * z, z, n));
            }
            return one - sum;
        }
        case FamilyId::wa: {
            Ext sum{0};
            for (int n = 1; n <= kGfTerms; ++n) {
                sum += pow_int(v, n) * pow_int(v - one, n - 1) *
                       pow_int(z, n * (n + 1) / 2) /
                       (q_pochhammer(z, z, n) * q_pochhammer(v * z, z, n - 1));
            }
            return one - sum;
        }
        case FamilyId::st: {
            Ext sum{0};
            for (int n = 0; n <= kGfTerms; ++n) {
                Ext t = pow_int(v, n) * pow_int(z, n * (n + 1) / 2) /
                        (q_pochhammer(z, z, n) * q_pochhammer(v * z, z, n));
                sum += (n % 2) ? -t : t;
            }
            return sum;
        }
        case FamilyId::cc: {
            Ext head = one - v * z * (one + v * z) / ((one - z) * (one - v * z));
            Ext sum{0};
            for (int n = 2; n <= kGfTerms; ++n) {
                Ext xn = pow_int(v, n) * pow_int(one - v, 2 * n - 4) *
                         pow_int(z, n * (n + 1) / 2) *
                         q_pochhammer(v * v * z, z, 2 * n - 2) /
                         (q_pochhammer(z, z, n - 1) *
                          q_pochhammer(v * z, z, n - 2) *
                          pow_int(q_pochhammer(v * z, z, n - 1), 2) *
                          q_pochhammer(v * z, z, n) *
                          q_pochhammer(v * v * z, z, n - 1));
                if (n % 2 == 0) xn = -xn;  // (-1)^{n+1}
                Ext wn = pow_int(v, n) * pow_int(one - v, 2 * n - 3) *
                         pow_int(z, n * (n + 1) / 2) *
                         q_pochhammer(v * v * z, z, 2 * n - 1) /
                         (q_pochhammer(z, z, n) *
                          pow_int(q_pochhammer(v * z, z, n - 1), 3) *
                          q_pochhammer(v * z, z, n) *
                          q_pochhammer(v * v * z, z, n - 1));
                if (n % 2) wn = -wn;  // (-1)^n
                sum += v * xn + wn;
            }
            return head + sum;
        }
        default:
            throw std::logic_error("gf_value: family has no known GF");
    }
}

Ext gf_root(FamilyId id, const Ext& v) {
    Ext lo{0}, hi{0};
    Ext prev_z = Ext{1} / 100;
    Ext prev_f = gf_value(id, v, prev_z);
    bool found = false;
    for (int t = 2; t <= 97; ++t) {
        Ext z = Ext{t} / 100;
        Ext f = gf_value(id, v, z);
        if ((prev_f < 0) != (f < 0)) {
            lo = prev_z;
            hi = z;
            found = true;
            break;
        }
        prev_z = z;
        prev_f = f;
    }
    if (!found) throw SeriesError("gf_root: no sign change in (0,1)");
    Ext flo = gf_value(id, v, lo);
    for (int it = 0; it < 200; ++it) {
        Ext mid = (lo + hi) / 2;
        if (mid == lo || mid == hi) break;
        Ext fm = gf_value(id, v, mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

}  // namespace

std::optional<GfConstants> gf_perimeter_constants(FamilyId id) {
    if (!family_spec(id).supports_known_gf) return std::nullopt;

    const Ext h = Ext{1} / 10000;
    auto r_at = [&](const Ext& s) {
        return gf_root(id, boost::multiprecision::exp(s));
    };
    Ext r0 = r_at(Ext{0});
    Ext rp1 = r_at(h), rm1 = r_at(-h);
    Ext rp2 = r_at(2 * h), rm2 = r_at(-2 * h);
    Ext rph = r_at(h / 2), rmh = r_at(-h / 2);

    auto d1 = [](const Ext& a2, const Ext& a1, const Ext& b1, const Ext& b2,
                 const Ext& step) {
        return (-a2 + 8 * a1 - 8 * b1 + b2) / (12 * step);
    };
    auto d2 = [&r0](const Ext& a2, const Ext& a1, const Ext& b1, const Ext& b2,
                    const Ext& step) {
        return (-a2 + 16 * a1 - 30 * r0 + 16 * b1 - b2) / (12 * step * step);
    };
    Ext d1h = d1(rp2, rp1, rm1, rm2, h);
    Ext d1h2 = d1(rp1, rph, rmh, rm1, h / 2);
    Ext d2h = d2(rp2, rp1, rm1, rm2, h);
    Ext d2h2 = d2(rp1, rph, rmh, rm1, h / 2);
    Ext d1r = (16 * d1h2 - d1h) / 15;
    Ext d2r = (16 * d2h2 - d2h) / 15;

    Ext mu_half = -d1r / r0;
    Ext var_half = mu_half * mu_half - d2r / r0;

    GfConstants out;
    out.rho = to_double(r0);
    out.mu4 = to_double(2 * mu_half);
    out.sigma4_sq = to_double(4 * var_half);
    return out;
}

}  // namespace polyostat
