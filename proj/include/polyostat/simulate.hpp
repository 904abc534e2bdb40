#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "polyostat/families.hpp"

namespace polyostat {

// Counter-based generator, algorithm "splitmix64-ctr-v1": draw i of a stream
// with seed s is splitmix64_mix(s + (i+1) * golden). Streams never overlap
// for distinct seeds and any draw is addressable by its index, so appended
// draws continue a trajectory exactly.
inline constexpr std::string_view kGeneratorId = "splitmix64-ctr-v1";

std::uint64_t mix64(std::uint64_t z);
std::uint64_t substream(std::uint64_t seed, std::uint64_t index);

struct Rng {
    std::uint64_t seed;
    std::uint64_t draws = 0;

    std::uint64_t next();
    double uniform();               // (next() >> 11) * 2^-53, in [0,1)
    int uniform_int(int n);         // in [0, n)
};

struct Trajectory {
    FamilyId family;
    std::uint64_t seed;        // column-channel seed
    std::uint64_t perim_seed;  // exposure-channel seed, set by attach_perimeter
    std::vector<int> columns;       // x_d, d = 1..m
    std::vector<int> vertical;      // T_d; T_1 = 0; empty until attached
    std::vector<long long> X;       // partial sums of columns
    std::vector<long long> Q;       // partial sums of vertical
    std::uint64_t column_draws = 0;
    std::uint64_t perim_draws = 0;

    int m() const { return (int)columns.size(); }
    long long area() const { return X.empty() ? 0 : X.back(); }
    bool has_perimeter() const { return !vertical.empty(); }
};

// x_1 from pi2, then transitions from Pi, by inverse CDF over the truncated
// cumulative tables (K_max columns; tail mass below 1e-15 folded into the
// last cell).
Trajectory sample_chain(FamilyId family, int m, std::uint64_t seed);

// T_d for every joint (x_{d-1}, x_d), from the family's placement law.
Trajectory attach_perimeter(Trajectory traj, std::uint64_t seed);

// One exposure draw conditioned on the adjacent pair; es and wa consume no
// randomness.
int sample_exposure(FamilyId family, int k, int j, Rng& rng);

// Extends with fresh chain steps while the next column still fits under n,
// truncates whole columns while the area exceeds n. Afterwards
// X(m*) in [n - K_max, n]. Both channels continue their recorded streams.
Trajectory resize_to_area(Trajectory traj, long long n);

// Column-at-a-time generation with running sums, so a trajectory of any
// length can be written out without being materialized. Columns ride the
// stream of `seed`, exposures ride substream(seed, 1); the result matches
// sample_chain + attach_perimeter with those seeds row for row.
class TrajectoryStream {
  public:
    TrajectoryStream(FamilyId family, std::uint64_t seed);

    struct Row {
        long long step, x, X, T, Q;
    };
    Row next();

  private:
    FamilyId family_;
    Rng crng_, prng_;
    int prev_ = 0;
    long long step_ = 0, X_ = 0, Q_ = 0;
};

struct SimReport {
    FamilyId family;
    int m;
    int trials;
    std::uint64_t seed;
    double z_mu2, z_var2;    // area X(m) before resizing vs m mu2, m sigma2^2
    double z_mu4s, z_var4s;  // Q(m*) after resizing vs n mu4*, n sigma4*^2
    double ks;               // (Q(m*) - n mu4*) / (sqrt(n) sigma4*) vs Phi
    bool variance_skipped;   // trials < 2
};

// n = floor(m mu2). Trial t runs on substream(seed, t).
SimReport gaussian_check(FamilyId family, int m, int trials,
                         std::uint64_t seed);

}  // namespace polyostat
