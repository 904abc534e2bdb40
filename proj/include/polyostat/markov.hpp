#pragma once

#include "polyostat/spectral.hpp"

namespace polyostat {

// Column-size Markov chain induced by the dominant singularity: the law of
// the last column, the size-biased stationary law of the bivariate chain,
// and the transition rows built from gluing counts and last-column weights.
template <class S>
struct ChainCore {
    FamilyId id;
    int K;
    S rho;
    std::vector<S> pi;                // last-column law, 1-based
    std::vector<S> rowsum;            // sum_j U(k,j) c2(j)
    std::vector<S> pi2;               // stationary law, 1-based
    S pi2_norm;                       // sum_k pi(k) rowsum(k); 1 in the limit
    std::vector<std::vector<S>> Pi;   // transitions, [k][j], 1-based
};

template <class S>
std::vector<S> last_column_law_from_phi(FamilyId id, const SpectralCore<S>& spec,
                                        int start_col) {
    KernelModel pm = spec.model;
    if (pm.L_max < pm.K_max) pm.L_max = pm.K_max;
    auto [val, der] = theta_phi(id, spec.rho, start_col, pm);
    (void)der;
    const int K = spec.model.K_max;
    S tot{0};
    for (int l = 1; l <= K; ++l) tot = tot + val[l];
    std::vector<S> pi(K + 1, S{0});
    for (int l = 1; l <= K; ++l) pi[l] = val[l] / tot;
    return pi;
}

template <class S>
ChainCore<S> build_chain_core(FamilyId id, const SpectralCore<S>& spec) {
    ChainCore<S> ch;
    ch.id = id;
    ch.K = spec.model.K_max;
    ch.rho = spec.rho;
    ch.pi = last_column_law_from_phi(id, spec, 1);

    const int K = ch.K;
    ch.rowsum.assign(K + 1, S{0});
    for (int k = 1; k <= K; ++k) {
        S s{0};
        for (int j = 1; j <= K; ++j) {
            long u = gluing_count(id, k, j);
            if (u != 0) s = s + S(u) * spec.c2[j];
        }
        ch.rowsum[k] = s;
    }

    std::vector<S> pre(K + 1, S{0});
    ch.pi2_norm = S{0};
    for (int k = 1; k <= K; ++k) {
        pre[k] = ch.pi[k] * ch.rowsum[k];
        ch.pi2_norm = ch.pi2_norm + pre[k];
    }
    ch.pi2.assign(K + 1, S{0});
    for (int k = 1; k <= K; ++k) ch.pi2[k] = pre[k] / ch.pi2_norm;

    ch.Pi.assign(K + 1, std::vector<S>(K + 1, S{0}));
    for (int k = 1; k <= K; ++k)
        for (int j = 1; j <= K; ++j) {
            long u = gluing_count(id, k, j);
            if (u != 0) ch.Pi[k][j] = S(u) * spec.c2[j] / ch.rowsum[k];
        }
    return ch;
}

const ChainCore<Ext>& chain_core(FamilyId id);
const ChainCore<double>& chain_core_d(FamilyId id);

// Active-profile facades.
std::vector<double> last_column_law(FamilyId id);
std::vector<double> stationary_law(FamilyId id);
std::vector<std::vector<double>> transition_matrix(FamilyId id);

struct ChainChecks {
    double row_residual;           // max_k |sum_j Pi(k,j) - 1|, k <= K-5
    double stationarity_residual;  // max_j |sum_k pi2(k)Pi(k,j) - pi2(j)|
    double reversibility_residual; // max |pi2(k)Pi(k,j) - pi2(j)Pi(j,k)|
    double tv_pow10;               // TV distance of row 1 of Pi^10 from pi2
    double c2_identity_residual;   // max_{k<=30} |c2(k) - rho^k sum_j U c2(j)|
    double pi_ratio_residual;      // max_j |pi(j)/rho^j - sum_k pi(k)U(k,j)|
    double pi2_ratio_residual;     // max_{k<=30} |pi2(k)/pi(k) - c2(k)/rho^k|
    double pi_start_residual;      // pi rebuilt from start columns 2 and 3
    double pi2_norm_dev;           // |pi2_norm - 1|
    double cc_linear_residual;     // cc eigen-identity for c2 = rho^j(aj+b)
    double pi_mean;                // mean of the last-column law
    double stationary_mean;        // mean of pi2; the column-size drift
    double stationary_var;
};
ChainChecks chain_checks(FamilyId id);
// Uncached rebuild with explicit truncations, for inspection from the CLI.
ChainChecks chain_checks(FamilyId id, const KernelModel& model);

}  // namespace polyostat
