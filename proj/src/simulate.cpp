#include "polyostat/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

#include "polyostat/markov.hpp"
#include "polyostat/moments.hpp"
#include "polyostat/spectral.hpp"

namespace polyostat {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ (kGolden * (index + 1)));
}

std::uint64_t Rng::next() { return mix64(seed + (++draws) * kGolden); }

double Rng::uniform() { return double(next() >> 11) * 0x1.0p-53; }

int Rng::uniform_int(int n) {
    int v = (int)(uniform() * n);
    return v < n ? v : n - 1;
}

namespace {

struct SamplerTables {
    int K;
    std::vector<double> cum_pi2;               // [k], k = 1..K
    std::vector<std::vector<double>> cum_row;  // [k][j]
};

std::vector<double> cumulative(const std::vector<double>& w, int K) {
    std::vector<double> cum(K + 1, 0.0);
    double s = 0;
    for (int k = 1; k <= K; ++k) {
        s += w[k];
        cum[k] = s;
    }
    // the truncated tail (< 1e-15 of the mass at K = 80) lands in cell K
    for (int k = 1; k <= K; ++k) cum[k] /= s;
    cum[K] = 1.0;
    return cum;
}

const SamplerTables& sampler_tables(FamilyId id) {
    static std::array<SamplerTables, kFamilyCount> tab;
    static std::array<std::once_flag, kFamilyCount> once;
    const auto idx = (std::size_t)id;
    std::call_once(once[idx], [&] {
        SamplerTables t;
        auto pi2 = stationary_law(id);
        auto Pi = transition_matrix(id);
        t.K = (int)pi2.size() - 1;
        t.cum_pi2 = cumulative(pi2, t.K);
        t.cum_row.resize(t.K + 1);
        for (int k = 1; k <= t.K; ++k) t.cum_row[k] = cumulative(Pi[k], t.K);
        tab[idx] = std::move(t);
    });
    return tab[idx];
}

int invert_cdf(const std::vector<double>& cum, double u) {
    auto it = std::upper_bound(cum.begin() + 1, cum.end(), u);
    if (it == cum.end()) --it;
    return (int)(it - cum.begin());
}

void push_column(Trajectory& t, int x) {
    t.columns.push_back(x);
    t.X.push_back(t.area() + x);
}

void push_exposure(Trajectory& t, int T) {
    t.vertical.push_back(T);
    t.Q.push_back((t.Q.empty() ? 0 : t.Q.back()) + T);
}

}  // namespace

Trajectory sample_chain(FamilyId family, int m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("sample_chain: m < 1");
    const auto& tab = sampler_tables(family);
    Trajectory t;
    t.family = family;
    t.seed = seed;
    t.perim_seed = 0;
    t.columns.reserve(m);
    t.X.reserve(m);
    Rng rng{seed};
    push_column(t, invert_cdf(tab.cum_pi2, rng.uniform()));
    for (int d = 2; d <= m; ++d)
        push_column(t, invert_cdf(tab.cum_row[t.columns.back()], rng.uniform()));
    t.column_draws = rng.draws;
    return t;
}

int sample_exposure(FamilyId family, int k, int j, Rng& rng) {
    switch (family) {
        case FamilyId::dcc: {
            int v = rng.uniform_int(k);
            return v + std::abs(j - k + v);
        }
        case FamilyId::cc: {
            int b = -j + 1 + rng.uniform_int(k + j - 1);
            int o = std::min(k - 1, b + j - 1) - std::max(0, b) + 1;
            return k + j - 2 * o;
        }
        case FamilyId::dc: {
            if (j == k + 1) return 4;
            if (j > k + 1) throw std::invalid_argument("dc: j > k + 1");
            return rng.uniform_int(k - j + 2) < 2 ? 2 : 0;
        }
        case FamilyId::st: {
            int z = rng.uniform_int(std::min(k, j));
            return std::abs(j - k) + 2 * z;
        }
        case FamilyId::es:
            if (j < k - 1) throw std::invalid_argument("es: j < k - 1");
            return std::abs(j - k);
        case FamilyId::wa:
            return std::abs(j - k);
    }
    throw std::logic_error("sample_exposure: bad family");
}

Trajectory attach_perimeter(Trajectory traj, std::uint64_t seed) {
    traj.perim_seed = seed;
    traj.vertical.clear();
    traj.Q.clear();
    traj.vertical.reserve(traj.columns.size());
    traj.Q.reserve(traj.columns.size());
    Rng rng{seed};
    push_exposure(traj, 0);  // the first column has no joint
    for (std::size_t d = 1; d < traj.columns.size(); ++d)
        push_exposure(traj, sample_exposure(traj.family, traj.columns[d - 1],
                                            traj.columns[d], rng));
    traj.perim_draws = rng.draws;
    return traj;
}

Trajectory resize_to_area(Trajectory traj, long long n) {
    if (n < 1) throw std::invalid_argument("resize_to_area: n < 1");
    while (!traj.columns.empty() && traj.area() > n) {
        traj.columns.pop_back();
        traj.X.pop_back();
        if (!traj.vertical.empty()) {
            traj.vertical.pop_back();
            traj.Q.pop_back();
        }
    }
    if (traj.columns.empty())
        throw std::invalid_argument("resize_to_area: first column exceeds n");
    const auto& tab = sampler_tables(traj.family);
    Rng crng{traj.seed};
    crng.draws = traj.column_draws;
    Rng prng{traj.perim_seed};
    prng.draws = traj.perim_draws;
    for (;;) {
        int j = invert_cdf(tab.cum_row[traj.columns.back()], crng.uniform());
        if (traj.area() + j > n) break;
        if (traj.has_perimeter())
            push_exposure(traj, sample_exposure(traj.family,
                                                traj.columns.back(), j, prng));
        push_column(traj, j);
    }
    traj.column_draws = crng.draws;
    traj.perim_draws = prng.draws;
    return traj;
}

TrajectoryStream::TrajectoryStream(FamilyId family, std::uint64_t seed)
    : family_(family), crng_{seed}, prng_{substream(seed, 1)} {}

TrajectoryStream::Row TrajectoryStream::next() {
    const auto& tab = sampler_tables(family_);
    int T = 0;
    int x;
    if (step_ == 0) {
        x = invert_cdf(tab.cum_pi2, crng_.uniform());
    } else {
        x = invert_cdf(tab.cum_row[prev_], crng_.uniform());
        T = sample_exposure(family_, prev_, x, prng_);
    }
    prev_ = x;
    ++step_;
    X_ += x;
    Q_ += T;
    return {step_, x, X_, T, Q_};
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

SimReport gaussian_check(FamilyId family, int m, int trials,
                         std::uint64_t seed) {
    if (m < 2 || trials < 1)
        throw std::invalid_argument("gaussian_check: need m >= 2, trials >= 1");
    const auto sc = spectral_constants(family);
    const auto js = joint_stats(family);
    const long long n = (long long)std::floor(m * sc.mu2);

    std::vector<double> areas(trials), qs(trials);
    for (int t = 0; t < trials; ++t) {
        std::uint64_t ts = substream(seed, (std::uint64_t)t);
        Trajectory traj = sample_chain(family, m, ts);
        areas[t] = (double)traj.area();
        traj = attach_perimeter(std::move(traj), substream(ts, 1));
        traj = resize_to_area(std::move(traj), n);
        qs[t] = (double)traj.Q.back();
    }

    auto mean_of = [&](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x;
        return s / (double)v.size();
    };
    auto var_of = [&](const std::vector<double>& v, double mean) {
        double s = 0;
        for (double x : v) s += (x - mean) * (x - mean);
        return s / (double)(v.size() - 1);
    };

    SimReport rep{};
    rep.family = family;
    rep.m = m;
    rep.trials = trials;
    rep.seed = seed;
    rep.variance_skipped = trials < 2;

    const double rt = std::sqrt((double)trials);
    const double abar = mean_of(areas);
    rep.z_mu2 = (abar - m * sc.mu2) * rt /
                (std::sqrt(sc.sigma2_sq) * std::sqrt((double)m));
    const double qbar = mean_of(qs);
    const double s4 = std::sqrt(js.sigma4_sq_sim);
    rep.z_mu4s = (qbar - n * js.mu4_sim) * rt / (std::sqrt((double)n) * s4);

    if (!rep.variance_skipped) {
        const double se = std::sqrt(2.0 / (double)(trials - 1));
        rep.z_var2 = (var_of(areas, abar) - m * sc.sigma2_sq) /
                     (m * sc.sigma2_sq * se);
        rep.z_var4s = (var_of(qs, qbar) - n * js.sigma4_sq_sim) /
                      (n * js.sigma4_sq_sim * se);
    }

    std::vector<double> z(qs);
    for (double& x : z) x = (x - n * js.mu4_sim) / (std::sqrt((double)n) * s4);
    std::sort(z.begin(), z.end());
    double ks = 0;
    for (int i = 0; i < trials; ++i) {
        double f = normal_cdf(z[i]);
        ks = std::max(ks, std::abs((i + 1) / (double)trials - f));
        ks = std::max(ks, std::abs(f - i / (double)trials));
    }
    rep.ks = ks;
    return rep;
}

}  // namespace polyostat
