#include "polyostat/markov.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>

namespace polyostat {

namespace {

template <class S>
const ChainCore<S>& cached_chain(FamilyId id, const SpectralCore<S>& spec) {
    static std::array<std::once_flag, kFamilyCount> flags;
    static std::array<std::unique_ptr<ChainCore<S>>, kFamilyCount> cores;
    auto k = static_cast<std::size_t>(id);
    std::call_once(flags[k], [&] {
        cores[k] = std::make_unique<ChainCore<S>>(build_chain_core(id, spec));
    });
    return *cores[k];
}

template <class T, class F>
std::vector<double> narrowed(const std::vector<T>& v, F conv) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = conv(v[i]);
    return out;
}

}  // namespace

const ChainCore<Ext>& chain_core(FamilyId id) {
    return cached_chain<Ext>(id, spectral_core(id));
}
const ChainCore<double>& chain_core_d(FamilyId id) {
    return cached_chain<double>(id, spectral_core_d(id));
}

std::vector<double> last_column_law(FamilyId id) {
    if (precision_profile() == Profile::dbl) return chain_core_d(id).pi;
    return narrowed(chain_core(id).pi, [](const Ext& x) { return to_double(x); });
}

std::vector<double> stationary_law(FamilyId id) {
    if (precision_profile() == Profile::dbl) return chain_core_d(id).pi2;
    return narrowed(chain_core(id).pi2,
                    [](const Ext& x) { return to_double(x); });
}

std::vector<std::vector<double>> transition_matrix(FamilyId id) {
    std::vector<std::vector<double>> out;
    auto fill = [&out](const auto& ch) {
        out.assign(ch.Pi.size(), {});
        for (std::size_t k = 0; k < ch.Pi.size(); ++k) {
            out[k].resize(ch.Pi[k].size());
            for (std::size_t j = 0; j < ch.Pi[k].size(); ++j)
                out[k][j] = to_double(ch.Pi[k][j]);
        }
    };
    if (precision_profile() == Profile::dbl)
        fill(chain_core_d(id));
    else
        fill(chain_core(id));
    return out;
}

namespace {

template <class S>
ChainChecks run_checks(FamilyId id, const SpectralCore<S>& spec,
                       const ChainCore<S>& ch) {
    const int K = ch.K;
    ChainChecks out{};
    auto dd = [](const S& x) { return to_double(x); };

    double worst = 0;
    for (int k = 1; k <= K - 5; ++k) {
        S s{0};
        for (int j = 1; j <= K; ++j) s = s + ch.Pi[k][j];
        worst = std::max(worst, std::fabs(dd(s) - 1.0));
    }
    out.row_residual = worst;

    worst = 0;
    for (int j = 1; j <= K - 5; ++j) {
        S s{0};
        for (int k = 1; k <= K; ++k) s = s + ch.pi2[k] * ch.Pi[k][j];
        worst = std::max(worst, std::fabs(dd(s - ch.pi2[j])));
    }
    out.stationarity_residual = worst;

    worst = 0;
    for (int k = 1; k <= K; ++k)
        for (int j = 1; j <= K; ++j)
            worst = std::max(worst, std::fabs(dd(ch.pi2[k] * ch.Pi[k][j] -
                                                 ch.pi2[j] * ch.Pi[j][k])));
    out.reversibility_residual = worst;

    // Row 1 of Pi^10 against pi2 in total variation.
    {
        std::vector<S> v(K + 1, S{0});
        v[1] = S{1};
        for (int step = 0; step < 10; ++step) {
            std::vector<S> nx(K + 1, S{0});
            for (int k = 1; k <= K; ++k) {
                if (mag(v[k]) == 0.0) continue;
                for (int j = 1; j <= K; ++j)
                    nx[j] = nx[j] + v[k] * ch.Pi[k][j];
            }
            v = std::move(nx);
        }
        S tv{0};
        for (int j = 1; j <= K; ++j) {
            S d = v[j] - ch.pi2[j];
            tv = tv + (to_double(d) < 0 ? -d : d);
        }
        out.tv_pow10 = dd(tv) / 2.0;
    }

    worst = 0;
    for (int k = 1; k <= 30; ++k) {
        S rhs{0};
        for (int j = 1; j <= K; ++j) {
            long u = gluing_count(id, k, j);
            if (u != 0) rhs = rhs + S(u) * spec.c2[j];
        }
        rhs = pow_int(spec.rho, k) * rhs;
        worst = std::max(worst, std::fabs(dd(spec.c2[k] - rhs)));
    }
    out.c2_identity_residual = worst;

    worst = 0;
    for (int j = 1; j <= K - 5; ++j) {
        S rhs{0};
        for (int k = 1; k <= K; ++k) {
            long u = gluing_count(id, k, j);
            if (u != 0) rhs = rhs + ch.pi[k] * S(u);
        }
        S lhs = ch.pi[j] / pow_int(spec.rho, j);
        worst = std::max(worst, std::fabs(dd(lhs - rhs)));
    }
    out.pi_ratio_residual = worst;

    worst = 0;
    for (int k = 1; k <= 30; ++k) {
        S lhs = ch.pi2[k] / ch.pi[k];
        S rhs = spec.c2[k] / pow_int(spec.rho, k);
        worst = std::max(worst, std::fabs(dd(lhs - rhs)));
    }
    out.pi2_ratio_residual = worst;

    worst = 0;
    for (int start : {2, 3}) {
        auto alt = last_column_law_from_phi(id, spec, start);
        for (int j = 1; j <= K; ++j)
            worst = std::max(worst, std::fabs(dd(alt[j] - ch.pi[j])));
    }
    out.pi_start_residual = worst;

    out.pi2_norm_dev = std::fabs(dd(ch.pi2_norm) - 1.0);

    out.cc_linear_residual = 0;
    if (id == FamilyId::cc) {
        S r = spec.rho;
        S a = spec.c2[2] / (r * r) - spec.c2[1] / r;
        S b = S{2} * spec.c2[1] / r - spec.c2[2] / (r * r);
        worst = 0;
        for (int k = 1; k <= 30; ++k) {
            S s{0};
            for (int j = 1; j <= K; ++j)
                s = s + S(k + j - 1) * pow_int(r, j) * (a * S(j) + b);
            worst = std::max(worst, std::fabs(dd(s - (a * S(k) + b))));
        }
        out.cc_linear_residual = worst;
    }

    S pm{0}, m{0}, m2{0};
    for (int k = 1; k <= K; ++k) {
        pm = pm + S(k) * ch.pi[k];
        m = m + S(k) * ch.pi2[k];
        m2 = m2 + S(k) * S(k) * ch.pi2[k];
    }
    out.pi_mean = dd(pm);
    out.stationary_mean = dd(m);
    out.stationary_var = dd(m2 - m * m);
    return out;
}

}  // namespace

ChainChecks chain_checks(FamilyId id) {
    if (precision_profile() == Profile::dbl)
        return run_checks<double>(id, spectral_core_d(id), chain_core_d(id));
    return run_checks<Ext>(id, spectral_core(id), chain_core(id));
}

ChainChecks chain_checks(FamilyId id, const KernelModel& model) {
    if (precision_profile() == Profile::dbl) {
        auto spec = build_spectral_core<double>(id, model);
        auto ch = build_chain_core(id, spec);
        return run_checks<double>(id, spec, ch);
    }
    auto spec = build_spectral_core<Ext>(id, model);
    auto ch = build_chain_core(id, spec);
    return run_checks<Ext>(id, spec, ch);
}

}  // namespace polyostat
