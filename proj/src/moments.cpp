#include "polyostat/moments.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace polyostat {

template <class S>
void step_moments_t(FamilyId id, long k, long j, S& et, S& et2) {
    if (k < 1 || j < 1 || gluing_count(id, k, j) == 0)
        throw std::invalid_argument("step_moments: pair has no gluing");
    switch (id) {
        case FamilyId::dcc: {
            S ew{0}, ew2{0};
            for (long i = 1; i <= k; ++i) {
                long d = j >= i ? j - i : i - j;
                ew = ew + S(d);
                ew2 = ew2 + S(d * d);
            }
            ew = ew / S(k);
            ew2 = ew2 / S(k);
            S ez = S(j - 1) / S{2};
            S ez2 = S((j - 1) * j * (2 * j - 1)) / S(6 * j);
            et = ew + ez;
            et2 = ew2 + S{2} * ew * ez + ez2;
            return;
        }
        case FamilyId::cc: {
            S ez = S(k * k + j * j - k - j) / S(2 * (j + k - 1));
            S ez2 = S(2 * j * j - j - 2 * j * k - k + 2 * k * k) / S{6};
            S ezw;
            if (j > k)
                ezw = S(-j + 3 * k + j * j * j - 6 * j * k - 3 * k * k * k -
                        3 * k * j * j + 9 * j * k * k) /
                      S(6 * (j + k - 1));
            else
                ezw = -S(-3 * j + k + 3 * j * j * j + 6 * j * k - k * k * k -
                         9 * k * j * j + 3 * j * k * k) /
                      S(6 * (j + k - 1));
            et = S{2} * ez;
            et2 = S{2} * ez2 + S{2} * ezw;
            return;
        }
        case FamilyId::dc: {
            et = S{4} / S(k - j + 2);
            et2 = (j == k + 1) ? S{16} : S{8} / S(k - j + 2);
            return;
        }
        case FamilyId::st: {
            S ez2, ew2, ezw;
            if (j <= k) {
                et = S(k - 1);
                ez2 = S(k * k - k * j - k) + S(j * j) / S{3} + S(j) / S{2} +
                      S{1} / S{6};
                ew2 = S(j * j) / S{3} - S(j) / S{2} + S{1} / S{6};
                ezw = S(k * j) / S{2} - S(k) / S{2} - S(j * j) / S{6} +
                      S{1} / S{6};
            } else {
                et = S(j - 1);
                ez2 = S(k * k) / S{3} - S(k) / S{2} + S{1} / S{6};
                ew2 = S(j * j - k * j - j) + S(k * k) / S{3} + S(k) / S{2} +
                      S{1} / S{6};
                ezw = S(k * j) / S{2} - S(j) / S{2} - S(k * k) / S{6} +
                      S{1} / S{6};
            }
            et2 = ez2 + ew2 + S{2} * ezw;
            return;
        }
        case FamilyId::es: {
            et = (j == k - 1) ? S{1} : S(j - k);
            et2 = et * et;
            return;
        }
        case FamilyId::wa: {
            et = S(j >= k ? j - k : k - j);
            et2 = et * et;
            return;
        }
    }
    throw std::logic_error("bad family");
}

template void step_moments_t<double>(FamilyId, long, long, double&, double&);
template void step_moments_t<Ext>(FamilyId, long, long, Ext&, Ext&);

StepMoments step_moments(FamilyId id, long k, long j) {
    double a, b;
    step_moments_t<double>(id, k, j, a, b);
    return {a, b};
}

namespace {

template <class S>
LagModel<S> build_lag(FamilyId id, const SpectralCore<S>& spec) {
    const KernelModel& m = spec.model;
    LagModel<S> lag;
    lag.L = m.L_max;
    lag.M.assign(m.K_max + 1, std::vector<S>(m.L_max + 1, S{0}));
    S hw2 = S{2} * spec.hw * spec.hw;
    for (int i = 1; i <= m.K_max; ++i) {
        auto m1 = theta_m1(id, spec.rho, i, m);
        auto [val, der] = theta_phi(id, spec.rho, i, m);
        for (int l = 1; l <= m.L_max; ++l)
            lag.M[i][l] = m1[l] + der[l] / spec.hw - val[l] * spec.hww / hw2;
    }
    return lag;
}

template <class S>
const LagModel<S>& cached_lag(FamilyId id, const SpectralCore<S>& spec) {
    static std::array<std::once_flag, kFamilyCount> flags;
    static std::array<std::unique_ptr<LagModel<S>>, kFamilyCount> models;
    auto k = static_cast<std::size_t>(id);
    std::call_once(flags[k], [&] {
        models[k] = std::make_unique<LagModel<S>>(build_lag(id, spec));
    });
    return *models[k];
}

template <class S>
struct JointCore {
    S mu3, sig3;
    S sigQ, CXQ, rxq;
    S alpha, beta, gamma, mu4, sig4;
    S mu2c, sigx, sigXclt;
    S beta_sim, mu4_sim, sig4_sim;
    S waDev;
};

// scale: multiplies every chain average and every xi5 block. 1 for the
// converged statistics; the published es row scales by the relative
// truncation of the tabulated weight depth.
template <class S>
JointCore<S> build_joint(FamilyId id, const SpectralCore<S>& spec,
                         const ChainCore<S>& ch, const LagModel<S>& lag,
                         const S& scale) {
    const int K = ch.K;
    std::vector<std::vector<S>> tET(K + 1, std::vector<S>(K + 1, S{0}));
    std::vector<std::vector<S>> tET2(K + 1, std::vector<S>(K + 1, S{0}));
    for (int k = 1; k <= K; ++k)
        for (int j = 1; j <= K; ++j)
            if (gluing_count(id, k, j) != 0)
                step_moments_t<S>(id, k, j, tET[k][j], tET2[k][j]);

    auto ebar = [&](auto f) {
        S s{0};
        for (int k = 1; k <= K; ++k) {
            S row{0};
            for (int j = 1; j <= K; ++j) {
                if (mag(ch.Pi[k][j]) != 0.0)
                    row = row + ch.Pi[k][j] * f(k, j);
            }
            s = s + ch.pi2[k] * row;
        }
        return s;
    };
    using Fn = std::function<S(int, int)>;
    auto xi5s = [&](const Fn& F1, const Fn& F2) {
        return scale * xi5_general(spec, ch, lag, F1, F2);
    };

    Fn fET = [&](int k, int j) { return tET[k][j]; };
    Fn fJ = [](int, int j) { return S(j); };
    Fn fK = [](int, int k) { return S(k); };

    JointCore<S> out;
    out.mu3 = scale * ebar([&](int k, int j) { return tET[k][j]; });
    out.sig3 =
        scale * ebar([&](int k, int j) { return tET2[k][j]; }) - out.mu3 * out.mu3;
    out.mu2c = ebar([](int, int j) { return S(j); });

    S m1{0}, m2{0};
    for (int k = 1; k <= K; ++k) {
        m1 = m1 + S(k) * ch.pi2[k];
        m2 = m2 + S(k) * S(k) * ch.pi2[k];
    }
    out.sigx = m2 - m1 * m1;

    if (id == FamilyId::dcc) {
        // Per-column regrouped exposures share one uniform per joint; the
        // lag-1 coupling reduces to prefix sums over the stationary law.
        const auto& pi2 = ch.pi2;
        std::vector<S> Pu(K + 2, S{0});
        for (int r = K; r >= 1; --r) Pu[r] = Pu[r + 1] + pi2[r] / S(r);
        std::vector<S> W(K + 2, S{0}), WS(K + 2, S{0});
        for (int v = 1; v <= K; ++v) {
            S s{0};
            for (int l = 1; l <= K; ++l)
                s = s + pi2[l] * S(l > v ? l - v : v - l);
            W[v] = s;
            WS[v] = WS[v - 1] + W[v];
        }
        S Ew{0}, Ez{0};
        for (int r = 1; r <= K; ++r) Ew = Ew + Pu[r] * W[r];
        for (int j = 1; j <= K; ++j) Ez = Ez + pi2[j] * S(j - 1) / S{2};
        S S4{0};
        for (int r = 1; r <= K; ++r) {
            S inner{0};
            for (int j = 1; j <= K; ++j)
                inner = inner + pi2[j] * S(j > r ? j - r : r - j) * WS[j] / S(j);
            S4 = S4 + Pu[r] * inner;
        }
        S S5 = Ew * Ez;
        S S6 = Ez * Ez;
        S S7{0};
        for (int j = 1; j <= K; ++j) {
            S inner{0};
            for (int v = 1; v <= j; ++v) inner = inner + S(j - v) * W[v];
            S7 = S7 + pi2[j] / S(j) * inner;
        }
        S ET2T3 = S4 + S5 + S6 + S7;
        out.sigQ = out.sig3 + S{2} * (ET2T3 - out.mu3 * out.mu3);
        S S8{0};
        for (int r = 1; r <= K; ++r) {
            S inner{0};
            for (int j = 1; j <= K; ++j)
                inner = inner + pi2[j] * S(j > r ? j - r : r - j) * S(j);
            S8 = S8 + Pu[r] * inner;
        }
        for (int j = 1; j <= K; ++j)
            S8 = S8 + pi2[j] * S(j) * S(j - 1) / S{2};
        S S9{0};
        for (int j = 1; j <= K; ++j) S9 = S9 + pi2[j] * WS[j];
        S9 = S9 + out.mu2c * Ez;
        out.CXQ = S8 + S9 - S{2} * out.mu2c * out.mu3;
        out.waDev = S{0};
    } else if (id == FamilyId::wa) {
        S p = S{1} / S{2};
        S q = S{1} - p;
        S p2 = p * p, p3 = p2 * p, p4 = p3 * p;
        out.sigQ = S{4} * q * (p4 + S{9} * p2 - S{4} * p3 - S{10} * p + S{5}) /
                   (p2 * (S{2} - p) * (S{2} - p) * (p2 + S{3} - S{3} * p));
        out.CXQ = S{2} * (S{2} - S{4} * p + S{3} * p2 - p3) /
                  (p2 * (S{2} - p) * (S{2} - p));
        S sigQg = out.sig3 + S{2} * xi5s(fET, fET);
        S cg = scale * ebar([&](int k, int j) { return S(j) * tET[k][j]; }) -
               out.mu2c * out.mu3 + xi5s(fJ, fET) + xi5s(fET, fK);
        S d1 = scalar_traits<S>::abs((sigQg - out.sigQ) / out.sigQ);
        S d2 = scalar_traits<S>::abs((cg - out.CXQ) / out.CXQ);
        out.waDev = to_double(d1) > to_double(d2) ? d1 : d2;
    } else {
        out.sigQ = out.sig3 + S{2} * xi5s(fET, fET);
        out.CXQ = scale * ebar([&](int k, int j) { return S(j) * tET[k][j]; }) -
                  out.mu2c * out.mu3 + xi5s(fJ, fET) + xi5s(fET, fK);
        out.waDev = S{0};
    }

    S sq = scalar_traits<S>::sqrt(out.sigQ);
    S s2 = scalar_traits<S>::sqrt(spec.sigma2_sq);
    out.rxq = out.CXQ / (s2 * sq);
    out.alpha = out.CXQ / spec.sigma2_sq;
    S hinc = S(family_spec(id).horizontal_increment);
    out.beta = out.mu3 + hinc - out.CXQ * spec.mu2 / spec.sigma2_sq;
    out.gamma = out.sigQ * (S{1} - out.rxq * out.rxq);
    out.mu4 = out.alpha + out.beta * spec.mu1;
    out.sig4 = out.gamma * spec.mu1 + spec.sigma1_sq * out.beta * out.beta;
    out.beta_sim = out.beta - hinc;
    out.mu4_sim = out.alpha + out.beta_sim * spec.mu1;
    out.sig4_sim =
        out.gamma * spec.mu1 + spec.sigma1_sq * out.beta_sim * out.beta_sim;

    out.sigXclt = out.sigx + S{2} * xi5_general(spec, ch, lag, fJ, fK);
    return out;
}

template <class S>
struct MomentBundle {
    JointCore<S> joint;      // converged weights
    JointCore<S> published;  // es: shallow weight numerators
    S c2_published;          // scalar under the family's convention
};

template <class S>
MomentBundle<S> build_bundle(FamilyId id, const SpectralCore<S>& spec,
                             const ChainCore<S>& ch, const LagModel<S>& lag) {
    MomentBundle<S> b;
    b.joint = build_joint(id, spec, ch, lag, S{1});
    if (id == FamilyId::es) {
        KernelModel shallow;  // tabulated depth
        S c2s1 = -kernel_n1(id, S{1}, spec.rho, 1, shallow) / spec.hw;
        b.published = build_joint(id, spec, ch, lag, c2s1 / spec.c2[1]);
        b.c2_published = c2s1;
    } else {
        b.published = b.joint;
        switch (id) {
            case FamilyId::dcc:
            case FamilyId::cc:
            case FamilyId::wa: b.c2_published = spec.c2_total; break;
            default: b.c2_published = spec.c2_first; break;
        }
    }
    return b;
}

template <class S>
const MomentBundle<S>& cached_bundle(FamilyId id, const SpectralCore<S>& spec,
                                     const ChainCore<S>& ch,
                                     const LagModel<S>& lag) {
    static std::array<std::once_flag, kFamilyCount> flags;
    static std::array<std::unique_ptr<MomentBundle<S>>, kFamilyCount> bundles;
    auto k = static_cast<std::size_t>(id);
    std::call_once(flags[k], [&] {
        bundles[k] =
            std::make_unique<MomentBundle<S>>(build_bundle(id, spec, ch, lag));
    });
    return *bundles[k];
}

const MomentBundle<Ext>& bundle_ext(FamilyId id) {
    return cached_bundle<Ext>(id, spectral_core(id), chain_core(id),
                              cached_lag<Ext>(id, spectral_core(id)));
}
const MomentBundle<double>& bundle_dbl(FamilyId id) {
    return cached_bundle<double>(id, spectral_core_d(id), chain_core_d(id),
                                 cached_lag<double>(id, spectral_core_d(id)));
}

template <class S>
JointStats narrow_joint(const JointCore<S>& j) {
    JointStats out{};
    out.mu3 = to_double(j.mu3);
    out.sigma3_sq = to_double(j.sig3);
    out.sigma_q_sq = to_double(j.sigQ);
    out.c_xq = to_double(j.CXQ);
    out.rho_xq = to_double(j.rxq);
    out.alpha = to_double(j.alpha);
    out.beta = to_double(j.beta);
    out.gamma = to_double(j.gamma);
    out.mu4 = to_double(j.mu4);
    out.sigma4_sq = to_double(j.sig4);
    out.mu2_chain = to_double(j.mu2c);
    out.sigma_x_station = to_double(j.sigx);
    out.sigma_x_clt = to_double(j.sigXclt);
    out.beta_sim = to_double(j.beta_sim);
    out.mu4_sim = to_double(j.mu4_sim);
    out.sigma4_sq_sim = to_double(j.sig4_sim);
    out.wa_closed_dev = to_double(j.waDev);
    return out;
}

}  // namespace

const LagModel<Ext>& lag_model(FamilyId id) {
    return cached_lag<Ext>(id, spectral_core(id));
}
const LagModel<double>& lag_model_d(FamilyId id) {
    return cached_lag<double>(id, spectral_core_d(id));
}

double xi5(FamilyId id, const std::function<double(int, int)>& F1,
           const std::function<double(int, int)>& F2) {
    if (!family_spec(id).uses_xi5)
        throw std::invalid_argument(
            "xi5: family has a closed long-range treatment");
    if (precision_profile() == Profile::dbl) {
        const auto& spec = spectral_core_d(id);
        return xi5_general<double>(spec, chain_core_d(id), lag_model_d(id), F1,
                                   F2);
    }
    const auto& spec = spectral_core(id);
    auto lift = [](const std::function<double(int, int)>& f) {
        return std::function<Ext(int, int)>(
            [f](int a, int b) { return Ext(f(a, b)); });
    };
    return to_double(xi5_general<Ext>(spec, chain_core(id), lag_model(id),
                                      lift(F1), lift(F2)));
}

VerticalStats vertical_stats(FamilyId id) {
    if (precision_profile() == Profile::dbl) {
        const auto& b = bundle_dbl(id);
        return {b.published.mu3, b.published.sig3};
    }
    const auto& b = bundle_ext(id);
    return {to_double(b.published.mu3), to_double(b.published.sig3)};
}

JointStats joint_stats(FamilyId id) {
    if (precision_profile() == Profile::dbl)
        return narrow_joint(bundle_dbl(id).joint);
    return narrow_joint(bundle_ext(id).joint);
}

PublishedRow published_constants(FamilyId id) {
    PublishedRow row{};
    auto fill = [&](const auto& spec, const auto& b) {
        row.rho = to_double(spec.rho);
        row.mu1 = to_double(spec.mu1);
        row.sigma1_sq = to_double(spec.sigma1_sq);
        row.mu2 = to_double(spec.mu2);
        row.sigma2_sq = to_double(spec.sigma2_sq);
        row.c2 = to_double(b.c2_published);
        row.c2_total = to_double(spec.c2_total);
        row.mu3 = to_double(b.published.mu3);
        row.sigma3_sq = to_double(b.published.sig3);
        row.sigma_q_sq = to_double(b.published.sigQ);
        row.c_xq = to_double(b.published.CXQ);
        row.rho_xq = to_double(b.published.rxq);
        row.mu4 = to_double(b.published.mu4);
        row.sigma4_sq = to_double(b.published.sig4);
    };
    if (precision_profile() == Profile::dbl)
        fill(spectral_core_d(id), bundle_dbl(id));
    else
        fill(spectral_core(id), bundle_ext(id));
    row.gf_supported = family_spec(id).supports_known_gf;
    return row;
}

}  // namespace polyostat
