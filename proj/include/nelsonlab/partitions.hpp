#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace nelsonlab {

/// Symmetric N x N array with entries 1..N, each exactly once per row and
/// column.
struct LatinSquare {
    int size = 0;
    std::vector<int> entries;  // row-major, size*size

    int at(int i, int j) const { return entries[static_cast<std::size_t>(i) * size + j]; }
};

bool is_commutative_latin_square(const LatinSquare& square);

/// Index pairs (i, j), 1 <= i <= j <= N.
using IndexPair = std::pair<int, int>;

/// Disjoint blocks covering J_N = {(i,j) : 1 <= i <= j <= N}.
struct PairPartition {
    int n = 0;
    std::vector<std::vector<IndexPair>> blocks;
};

/// Additive table of Z_N: S(i,j) = ((i + j - 2) mod N) + 1.
LatinSquare cyclic_latin_square(int n);

/// Blocks S^{-1}{1}, ..., S^{-1}{N} restricted to i <= j.  The input must be
/// a commutative Latin square.
PairPartition partition_from_square(const LatinSquare& square);

/// True iff within every block all indices across distinct pairs are
/// distinct.
bool is_admissible(const PairPartition& partition);

/// Rebuilds the symmetric square from an admissible partition with exactly
/// N blocks; validation error if the result is not a commutative Latin
/// square.
LatinSquare rebuild_square(const PairPartition& partition);

/// Minimum block count among admissible partitions of J_n, by exhaustive
/// enumeration of set partitions; n <= 4 only.
int min_admissible_size(int n);

struct HolderSplit {
    double diag_coeff = 0.0;      // N beta
    double cross_coeff = 0.0;     // 2 N beta
    double cross_exponent = 0.0;  // (N-1)/2
};

HolderSplit holder_split(int n, double beta);

struct HolderCheckReport {
    int n = 0;
    int trials = 0;
    double max_ratio = 0.0;  // max over trials of LHS/RHS
    bool pass = false;       // max_ratio <= 1 + 1e-12
};

/// Exact-enumeration stress test of E(prod Gamma_{m,n}) <= prod
/// E(Gamma_{m,n}^N)^{1/N} for random nonnegative tables Gamma_{m,n} =
/// g_{m,n}(U_m, U_n) with independent uniform U_i over a 3-point space.
HolderCheckReport holder_inequality_check(int n, int trials, std::uint64_t seed = 12345);

}  // namespace nelsonlab
