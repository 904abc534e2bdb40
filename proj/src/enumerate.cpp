#include "polyostat/enumerate.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "polyostat/spectral.hpp"

namespace polyostat {

namespace {

constexpr int kTableCap = 60;
constexpr int kHistogramCap = 14;

const BigInt kZero{0};

}  // namespace

const BigInt& ExactCountTable::at(int m, int n, int j) const {
    if (n < 1 || n > n_max || m < 1 || m > n || j < 1 || j > n) return kZero;
    return counts[n][m][j];
}

BigInt ExactCountTable::width_count(int n, int m) const {
    BigInt s = 0;
    for (int j = 1; j <= n; ++j) s += at(m, n, j);
    return s;
}

BigInt ExactCountTable::total(int n) const {
    BigInt s = 0;
    for (int m = 1; m <= n; ++m) s += width_count(n, m);
    return s;
}

ExactCountTable count_table(FamilyId family, int n_max) {
    if (n_max < 1)
        throw std::invalid_argument("count_table: n_max must be positive");
    if (n_max > kTableCap)
        throw std::length_error("count_table: n_max capped at 60");

    ExactCountTable t;
    t.family = family;
    t.n_max = n_max;
    t.counts.resize(n_max + 1);
    for (int n = 1; n <= n_max; ++n) {
        t.counts[n].assign(n + 1, std::vector<BigInt>(n + 1, BigInt{0}));
        t.counts[n][1][n] = 1;  // single column of size n
    }
    for (int m = 2; m <= n_max; ++m) {
        for (int n = m; n <= n_max; ++n) {
            for (int j = 1; j <= n - m + 1; ++j) {
                BigInt acc = 0;
                int n_prev = n - j;
                for (int k = 1; k <= n_prev - m + 2; ++k) {
                    long u = gluing_count(family, k, j);
                    if (u != 0) acc += u * t.counts[n_prev][m - 1][k];
                }
                t.counts[n][m][j] = std::move(acc);
            }
        }
    }
    return t;
}

BigInt brute_force_total(FamilyId family, int n) {
    if (n < 1)
        throw std::invalid_argument("brute_force_total: n must be positive");
    BigInt total = 0;
    // DFS over compositions; weight = product of gluing counts so far
    struct Node {
        int rem, last;
        BigInt w;
    };
    std::vector<Node> stack;
    for (int k = 1; k <= n; ++k) stack.push_back({n - k, k, BigInt{1}});
    while (!stack.empty()) {
        Node nd = std::move(stack.back());
        stack.pop_back();
        if (nd.rem == 0) {
            total += nd.w;
            continue;
        }
        for (int j = 1; j <= nd.rem; ++j) {
            long u = gluing_count(family, nd.last, j);
            if (u != 0) stack.push_back({nd.rem - j, j, nd.w * u});
        }
    }
    return total;
}

double growth_estimate(const ExactCountTable& table) {
    if (table.n_max < 20)
        throw std::invalid_argument("growth_estimate: needs n_max >= 20");
    int n = table.n_max;
    auto ratio = [&](int nn) {
        return table.total(nn - 1).convert_to<double>() /
               table.total(nn).convert_to<double>();
    };
    double rn = ratio(n);
    double rp = ratio(n - 1);
    // r_n = rho (1 + a/n + ...); eliminate the 1/n term
    return n * rn - (n - 1) * rp;
}

double llt_residual(const ExactCountTable& table, int n) {
    if (n < 1 || n > table.n_max)
        throw std::invalid_argument("llt_residual: n outside built table");
    SpectralConstants sc = spectral_constants(table.family);
    double mu = n * sc.mu1;
    double sd = std::sqrt(n * sc.sigma1_sq);
    double amp = sc.c1 * std::pow(sc.rho, -n);
    int lo = std::max(1, (int)std::ceil(mu - 2 * sd));
    int hi = std::min(n, (int)std::floor(mu + 2 * sd));
    double worst = 0;
    double cum = 0;
    for (int m = 1; m <= hi; ++m) {
        cum += table.width_count(n, m).convert_to<double>();
        if (m < lo) continue;
        // half-cell shift: the lattice mass at m sits across [m-1/2, m+1/2]
        double pred = 0.5 * std::erfc(-(m + 0.5 - mu) / (sd * std::sqrt(2.0)));
        double dev = std::abs(cum / amp - pred);
        if (dev > worst) worst = dev;
    }
    return worst;
}

BigInt PerimeterHistogram::total() const {
    BigInt s = 0;
    for (const auto& [q, c] : counts) s += c;
    return s;
}

double PerimeterHistogram::mean() const {
    BigInt s = 0, num = 0;
    for (const auto& [q, c] : counts) {
        s += c;
        num += q * c;
    }
    return num.convert_to<double>() / s.convert_to<double>();
}

namespace {

// Vertical-exposure outcomes (multiplicity, T) for a step k -> j, one entry
// per distinct T over the allowed offsets of the new column.
std::vector<std::pair<long, int>> step_outcomes(FamilyId family, int k, int j) {
    std::map<int, long> out;
    switch (family) {
        case FamilyId::dcc:
            for (int w = 0; w < j; ++w) out[w + std::abs(k - j + w)] += 1;
            break;
        case FamilyId::cc:
            for (int b2 = -j + 1; b2 <= k - 1; ++b2) {
                int o = std::min(k - 1, b2 + j - 1) - std::max(0, b2) + 1;
                out[k + j - 2 * o] += 1;
            }
            break;
        case FamilyId::st:
            if (j <= k)
                for (int z = k - j; z < k; ++z) out[z + (j - k + z)] += 1;
            else
                for (int w = j - k; w < j; ++w) out[w + (w - (j - k))] += 1;
            break;
        case FamilyId::es:
            if (j >= k - 1) out[std::abs(j - k)] += 1;
            break;
        case FamilyId::wa:
            out[std::abs(j - k)] += 1;
            break;
        case FamilyId::dc:
            if (j == k + 1) {
                out[4] += 1;
            } else if (j <= k) {
                out[2] += 2;
                if (k - j > 0) out[0] += k - j;
            }
            break;
    }
    std::vector<std::pair<long, int>> v;
    v.reserve(out.size());
    for (const auto& [t, mult] : out) v.emplace_back(mult, t);
    return v;
}

}  // namespace

PerimeterHistogram exact_perimeter_histogram(FamilyId family, int n) {
    if (n < 1)
        throw std::invalid_argument("perimeter histogram: n must be positive");
    if (n > kHistogramCap)
        throw std::length_error("perimeter histogram: n capped at 14");

    PerimeterHistogram hist;
    hist.family = family;
    hist.n = n;

    bool dc = family == FamilyId::dc;
    // frontier over (area, last column, accumulated perimeter so far)
    std::map<std::tuple<int, int, int>, BigInt> frontier;
    for (int k = 1; k <= n; ++k)
        frontier[{k, k, dc ? 4 * k : 2 + k}] = 1;
    while (!frontier.empty()) {
        std::map<std::tuple<int, int, int>, BigInt> next;
        for (const auto& [state, c] : frontier) {
            auto [a, k, q] = state;
            if (a == n) {
                hist.counts[dc ? q : q + k] += c;  // close with the right wall
                continue;
            }
            for (int j = 1; j <= n - a; ++j)
                for (const auto& [mult, t] : step_outcomes(family, k, j))
                    next[{a + j, j, q + (dc ? t : 2 + t)}] += c * mult;
        }
        frontier = std::move(next);
    }
    return hist;
}

void write_count_csv(std::ostream& os, const ExactCountTable& table) {
    os << "n,m,j,count\n";
    for (int n = 1; n <= table.n_max; ++n)
        for (int m = 1; m <= n; ++m)
            for (int j = 1; j <= n; ++j) {
                const BigInt& c = table.at(m, n, j);
                if (c != 0) os << n << ',' << m << ',' << j << ',' << c << '\n';
            }
}

void write_histogram_csv(std::ostream& os, const PerimeterHistogram& hist) {
    os << "n,perimeter,count\n";
    for (const auto& [q, c] : hist.counts)
        os << hist.n << ',' << q << ',' << c << '\n';
}

}  // namespace polyostat
