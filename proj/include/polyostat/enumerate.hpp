#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <iosfwd>
#include <map>
#include <vector>

#include "polyostat/families.hpp"

namespace polyostat {

using BigInt = boost::multiprecision::cpp_int;

// Exact slice-by-slice counts T(m, n, j): width m, area n, last column j.
// Immutable once built; all entries are exact integers.
struct ExactCountTable {
    FamilyId family;
    int n_max;
    // counts[n][m][j]; valid for 1 <= m <= n, 1 <= j <= n - m + 1
    std::vector<std::vector<std::vector<BigInt>>> counts;

    const BigInt& at(int m, int n, int j) const;
    BigInt width_count(int n, int m) const;  // sum over j
    BigInt total(int n) const;               // sum over m and j
};

// T(m,n,j) = sum_k U(k,j) T(m-1, n-j, k), seeded with single columns.
// n_max is capped at 60; counts grow like rho^{-n}.
ExactCountTable count_table(FamilyId family, int n_max);

// Independent check path: walks every composition of n into column sizes
// and multiplies gluing counts along the way. No table, no recurrence.
BigInt brute_force_total(FamilyId family, int n);

// rho estimate from total-count ratios at the last two areas, with one
// Richardson step. Requires n_max >= 20.
double growth_estimate(const ExactCountTable& table);

// Deviation from the local-limit prediction
//   T(m,n) ~ (C1 / rho^n) exp(-(m - n mu1)^2 / (2 n sigma1^2)) / (sqrt(2 pi n) sigma1)
// measured in cumulative form: max over m within two standard deviations of
// n mu1 of |sum_{m' <= m} T(m',n) rho^n / C1 - Phi((m + 1/2 - n mu1)/(sqrt(n) sigma1))|.
// Decays at the de Moivre-Laplace rate, roughly 1/sqrt(n).
double llt_residual(const ExactCountTable& table, int n);

struct PerimeterHistogram {
    FamilyId family;
    int n;
    std::map<int, BigInt> counts;  // perimeter value -> exact count

    BigInt total() const;
    double mean() const;
};

// Exhaustive joint (area, perimeter) law at fixed area. Offsets of each
// column are enumerated per adjacent pair, never materialized as grids.
// Column families report the full perimeter 2m + k_1 + k_m + sum T; dc
// reports its diagonal-contact perimeter 4 k_1 + sum T. Capped at n = 14.
PerimeterHistogram exact_perimeter_histogram(FamilyId family, int n);

// rows: n,m,j,count
void write_count_csv(std::ostream& os, const ExactCountTable& table);
// rows: n,perimeter,count
void write_histogram_csv(std::ostream& os, const PerimeterHistogram& hist);

}  // namespace polyostat
