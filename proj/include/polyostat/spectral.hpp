#pragma once

#include "polyostat/qseries.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace polyostat {

// Dominant-root data and the derived drift/dispersion constants shared by
// every downstream module. c2[j] is the last-column weight, 1-based.
template <class S>
struct SpectralCore {
    KernelModel model;
    S rho{0};
    S hw{0}, hz{0}, hww{0}, hwz{0}, hzz{0};
    S r1{0}, r2{0};
    S mu1{0}, sigma1_sq{0};
    S mu2{0}, sigma2_sq{0};
    S c1{0}, c2_first{0}, c2_total{0};
    std::vector<S> c2;
};

// Truncations for converged constants. The es amplitude numerators decay
// like plain powers of rho and need a much deeper tail than the families
// whose terms fall off like z^{j(j+1)/2}.
inline KernelModel deep_model(FamilyId id) {
    KernelModel m;
    m.J_max = (id == FamilyId::es) ? 160 : 24;
    m.L_max = 72;
    return m;
}

// Smallest root of h(1,z) in (0,1): coarse scan for the first sign change,
// bisection to scalar precision, then Newton polish on a z-jet.
template <class S>
S find_rho(FamilyId id, const KernelModel& m = {}) {
    const S one{1};
    auto f = [&](const S& z) { return kernel_h(id, one, z, m); };
    S lo{0}, hi{0};
    S prev_z = S{1} / S{100};
    S prev_v = f(prev_z);
    bool found = false;
    for (int t = 2; t <= 98; ++t) {
        S z = S(t) / S{100};
        S v = f(z);
        if (mag(v) == 0.0) {
            lo = hi = z;
            found = true;
            break;
        }
        if ((to_double(prev_v) < 0) != (to_double(v) < 0)) {
            lo = prev_z;
            hi = z;
            found = true;
            break;
        }
        prev_z = z;
        prev_v = v;
    }
    if (!found) throw SeriesError("find_rho: no sign change of h(1,z) in (0,1)");
    S flo = f(lo);
    for (int it = 0; it < 200 && to_double(hi - lo) > 0; ++it) {
        S mid = (lo + hi) / S{2};
        if (mid == lo || mid == hi) break;
        S fm = f(mid);
        if ((to_double(fm) < 0) == (to_double(flo) < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    S x = (lo + hi) / S{2};
    for (int it = 0; it < 6; ++it) {
        auto j = kernel_h(id, Jet1<S>{one}, Jet1<S>::variable(x), m);
        if (mag(j.d) == 0.0) break;
        x = x - j.v / j.d;
    }
    return x;
}

template <class S>
SpectralCore<S> build_spectral_core(FamilyId id, const KernelModel& m) {
    SpectralCore<S> core;
    core.model = m;
    core.rho = find_rho<S>(id, m);

    auto h = kernel_h(id, Jet2<S>::var_w(S{1}), Jet2<S>::var_z(core.rho), m);
    core.hw = h.dw;
    core.hz = h.dz;
    core.hww = h.dww;
    core.hwz = h.dwz;
    core.hzz = h.dzz;

    core.r1 = -core.hw / core.hz;
    core.r2 = -(core.r1 * core.r1 * core.hzz + S{2} * core.r1 * core.hwz +
                core.hw + core.hww) /
              core.hz;
    core.mu1 = -core.r1 / core.rho;
    core.sigma1_sq = core.mu1 * core.mu1 - core.r2 / core.rho;
    core.mu2 = S{1} / core.mu1;
    core.sigma2_sq = core.sigma1_sq / (core.mu1 * core.mu1 * core.mu1);

    S n1a = kernel_n1_any(id, S{1}, core.rho, m);
    core.c1 = -n1a / (core.rho * core.hz);
    core.c2_total = -n1a / core.hw;

    core.c2.assign(m.K_max + 1, S{0});
    for (int j = 1; j <= m.K_max; ++j)
        core.c2[j] = -kernel_n1(id, S{1}, core.rho, j, m) / core.hw;
    core.c2_first = core.c2[1];
    return core;
}

// Cached converged cores, one per scalar profile.
const SpectralCore<Ext>& spectral_core(FamilyId id);
const SpectralCore<double>& spectral_core_d(FamilyId id);

struct SpectralConstants {
    double rho;
    double hw, hz, hww, hwz, hzz;
    double r1, r2;
    double mu1, sigma1_sq;
    double mu2, sigma2_sq;
    double c1, c2_first, c2_total;
};

// Active-profile facade (POLYOSTAT_PRECISION).
SpectralConstants spectral_constants(FamilyId id);
std::vector<double> c2_weights(FamilyId id);

// Argument-principle sweep of h(1,z) on |z| = radius_factor * rho. A simple
// dominant root means winding number 1. The sweep is inconclusive when a
// single step turns the phase by more than pi/2.
struct RootCheck {
    bool conclusive;
    int winding;
    int points;
    double radius;
};
RootCheck verify_dominant_root(FamilyId id, int points = 4096,
                               double radius_factor = 1.05);

// Perimeter mean and variance per cell from the known area-perimeter
// generating functions (families with a published closed q-series form).
struct GfConstants {
    double rho;
    double mu4;
    double sigma4_sq;
};
std::optional<GfConstants> gf_perimeter_constants(FamilyId id);

}  // namespace polyostat
