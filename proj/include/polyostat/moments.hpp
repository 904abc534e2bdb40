#pragma once

#include "polyostat/markov.hpp"

#include <functional>

namespace polyostat {

// Conditional mean and second moment of the per-step vertical exposure for
// an adjacent column pair (k then j). Closed forms per family.
struct StepMoments {
    double e_t;
    double e_t2;
};
// Throws std::invalid_argument when the pair has no gluing.
StepMoments step_moments(FamilyId id, long k, long j);

template <class S>
void step_moments_t(FamilyId id, long k, long j, S& et, S& et2);

// Lag kernel M(i,l): direct channel plus the amplitude-perturbation part
// read off the slice series. Row i is the earlier column, l the gap carrier.
template <class S>
struct LagModel {
    std::vector<std::vector<S>> M;  // [1..K][0..L]
    int L;
};
const LagModel<Ext>& lag_model(FamilyId id);
const LagModel<double>& lag_model_d(FamilyId id);

// Factored long-range covariance sum over all lags >= 2:
//   xi5(F1,F2) = sum_j G1(j)/c2(j) * sum_l M(j,l) G2(l),
//   G1(j) = sum_u pi2(u) Pi(u,j) F1(u,j),
//   G2(l) = sum_k U(l,k) c2(k) F2(l,k).
template <class S>
S xi5_general(const SpectralCore<S>& spec, const ChainCore<S>& ch,
              const LagModel<S>& lag, const std::function<S(int, int)>& F1,
              const std::function<S(int, int)>& F2) {
    const int K = ch.K;
    FamilyId id = ch.id;
    std::vector<S> G1(K + 1, S{0});
    for (int j = 1; j <= K; ++j) {
        S s{0};
        for (int u = 1; u <= K; ++u)
            if (mag(ch.Pi[u][j]) != 0.0)
                s = s + ch.pi2[u] * ch.Pi[u][j] * F1(u, j);
        G1[j] = s;
    }
    std::vector<S> G2(lag.L + 1, S{0});
    for (int l = 1; l <= lag.L && l <= K; ++l) {
        S s{0};
        for (int k = 1; k <= K; ++k) {
            long u = gluing_count(id, l, k);
            if (u != 0) s = s + S(u) * spec.c2[k] * F2(l, k);
        }
        G2[l] = s;
    }
    S total{0};
    for (int j = 1; j <= K; ++j) {
        if (mag(G1[j]) == 0.0) continue;
        S inner{0};
        for (int l = 1; l <= lag.L; ++l) inner = inner + lag.M[j][l] * G2[l];
        total = total + G1[j] / spec.c2[j] * inner;
    }
    return total;
}

// Public op; defined for the families whose joint statistics go through the
// factored sum (cc, dc, st, es). Converged weights, active profile.
double xi5(FamilyId id, const std::function<double(int, int)>& F1,
           const std::function<double(int, int)>& F2);

struct VerticalStats {
    double mu3;
    double sigma3_sq;
};
// Tabulated normalization (es uses the shallow-depth weight numerators).
VerticalStats vertical_stats(FamilyId id);

// Converged joint perimeter statistics and the constants of the limit law.
struct JointStats {
    double mu3, sigma3_sq;
    double sigma_q_sq;   // CLT variance rate of the vertical perimeter
    double c_xq;         // CLT covariance rate of (area, vertical perimeter)
    double rho_xq;
    double alpha, beta, gamma;
    double mu4, sigma4_sq;
    double mu2_chain;    // stationary column-size mean
    double sigma_x_station;  // stationary column-size variance (no lags)
    double sigma_x_clt;  // sigma_x_station + 2 xi5(j,k); equals sigma2_sq
    double beta_sim, mu4_sim, sigma4_sq_sim;  // vertical-only versions
    double wa_closed_dev;  // wa: closed forms vs general path, max rel dev
};
JointStats joint_stats(FamilyId id);

// Row of tabulated constants: converged everywhere except the es joint
// block, which reproduces the shallow-numerator normalization of the
// published table.
struct PublishedRow {
    double rho;
    double mu1, sigma1_sq;
    double mu2, sigma2_sq;
    double c2;        // the family's tabulated scalar convention
    double c2_total;
    double mu3, sigma3_sq;
    double sigma_q_sq, c_xq, rho_xq;
    double mu4, sigma4_sq;
    bool gf_supported;
};
PublishedRow published_constants(FamilyId id);

}  // namespace polyostat
