#include "nelsonlab/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace nelsonlab {

namespace {

std::vector<IndexPair> all_pairs(int n) {
    std::vector<IndexPair> pairs;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) pairs.emplace_back(i, j);
    return pairs;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

bool is_commutative_latin_square(const LatinSquare& square) {
    const int n = square.size;
    if (n < 1 || square.entries.size() != static_cast<std::size_t>(n) * n) return false;
    for (int i = 0; i < n; ++i) {
        std::vector<bool> seen(n + 1, false);
        for (int j = 0; j < n; ++j) {
            const int v = square.at(i, j);
            if (v < 1 || v > n || seen[v]) return false;
            seen[v] = true;
            if (square.at(j, i) != v) return false;
        }
    }
    return true;  // symmetric with permutation rows implies permutation columns
}

LatinSquare cyclic_latin_square(int n) {
    if (n < 1) throw std::domain_error("cyclic_latin_square: requires n >= 1");
    LatinSquare square;
    square.size = n;
    square.entries.resize(static_cast<std::size_t>(n) * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            square.entries[static_cast<std::size_t>(i - 1) * n + (j - 1)] = (i + j - 2) % n + 1;
    return square;
}

PairPartition partition_from_square(const LatinSquare& square) {
    if (!is_commutative_latin_square(square))
        throw std::invalid_argument("partition_from_square: input is not a commutative Latin square");
    PairPartition partition;
    partition.n = square.size;
    partition.blocks.assign(square.size, {});
    for (int i = 1; i <= square.size; ++i)
        for (int j = i; j <= square.size; ++j)
            partition.blocks[square.at(i - 1, j - 1) - 1].emplace_back(i, j);
    return partition;
}

bool is_admissible(const PairPartition& partition) {
    for (const auto& block : partition.blocks) {
        std::map<int, std::size_t> owner;  // index -> pair position in block
        for (std::size_t k = 0; k < block.size(); ++k) {
            for (int idx : {block[k].first, block[k].second}) {
                auto [it, inserted] = owner.emplace(idx, k);
                if (!inserted && it->second != k) return false;
            }
        }
    }
    return true;
}

LatinSquare rebuild_square(const PairPartition& partition) {
    const int n = partition.n;
    if (static_cast<int>(partition.blocks.size()) != n)
        throw std::invalid_argument("rebuild_square: partition must have exactly N blocks");
    LatinSquare square;
    square.size = n;
    square.entries.assign(static_cast<std::size_t>(n) * n, 0);
    for (int v = 1; v <= n; ++v) {
        for (const auto& [i, j] : partition.blocks[v - 1]) {
            if (i < 1 || j < i || j > n)
                throw std::invalid_argument("rebuild_square: pair outside J_N");
            square.entries[static_cast<std::size_t>(i - 1) * n + (j - 1)] = v;
            square.entries[static_cast<std::size_t>(j - 1) * n + (i - 1)] = v;
        }
    }
    if (!is_commutative_latin_square(square))
        throw std::invalid_argument("rebuild_square: partition does not define a commutative Latin square");
    return square;
}

int min_admissible_size(int n) {
    if (n < 1) throw std::domain_error("min_admissible_size: requires n >= 1");
    if (n > 4)
        throw std::domain_error("min_admissible_size: exhaustive search supported only for n <= 4");

    const std::vector<IndexPair> pairs = all_pairs(n);
    int best = static_cast<int>(pairs.size()) + 1;

    // Depth-first enumeration of set partitions; a block is summarised by the
    // bitmask of particle indices it already uses, which encodes admissibility.
    std::vector<unsigned> masks;
    auto dfs = [&](auto&& self, std::size_t elem) -> void {
        if (static_cast<int>(masks.size()) >= best) return;
        if (elem == pairs.size()) {
            best = std::min<int>(best, static_cast<int>(masks.size()));
            return;
        }
        const unsigned bits =
            (1u << pairs[elem].first) | (1u << pairs[elem].second);
        for (std::size_t b = 0; b < masks.size(); ++b) {
            if ((masks[b] & bits) != 0) continue;
            masks[b] |= bits;
            self(self, elem + 1);
            masks[b] &= ~bits;
        }
        masks.push_back(bits);
        self(self, elem + 1);
        masks.pop_back();
    };
    dfs(dfs, 0);
    return best;
}

HolderSplit holder_split(int n, double beta) {
    if (n < 1) throw std::domain_error("holder_split: requires n >= 1");
    if (!(beta >= 0.0)) throw std::domain_error("holder_split: requires beta >= 0");
    return {n * beta, 2.0 * n * beta, (n - 1.0) / 2.0};
}

HolderCheckReport holder_inequality_check(int n, int trials, std::uint64_t seed) {
    if (n < 2 || n > 3)
        throw std::domain_error("holder_inequality_check: supported for n in [2, 3]");
    if (trials < 1) throw std::domain_error("holder_inequality_check: requires trials >= 1");

    constexpr int kStates = 3;  // each U_i uniform over {0, 1, 2}
    const std::vector<IndexPair> pairs = all_pairs(n);

    std::mt19937_64 gen(splitmix64(seed));
    HolderCheckReport report;
    report.n = n;
    report.trials = trials;

    std::vector<std::array<double, kStates * kStates>> table(pairs.size());
    int outcomes = 1;
    for (int i = 0; i < n; ++i) outcomes *= kStates;

    for (int t = 0; t < trials; ++t) {
        for (auto& g : table)
            for (double& v : g) v = uniform01(gen);

        // LHS: exact expectation of the product over all joint outcomes.
        double lhs = 0.0;
        for (int code = 0; code < outcomes; ++code) {
            int u[3] = {0, 0, 0};
            int c = code;
            for (int i = 0; i < n; ++i) {
                u[i] = c % kStates;
                c /= kStates;
            }
            double prod = 1.0;
            for (std::size_t k = 0; k < pairs.size(); ++k)
                prod *= table[k][u[pairs[k].first - 1] * kStates + u[pairs[k].second - 1]];
            lhs += prod;
        }
        lhs /= outcomes;

        // RHS: product of E(Gamma^n)^{1/n} per pair.
        double rhs = 1.0;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto [i, j] = pairs[k];
            double moment = 0.0;
            if (i == j) {
                for (int a = 0; a < kStates; ++a)
                    moment += std::pow(table[k][a * kStates + a], n);
                moment /= kStates;
            } else {
                for (double v : table[k]) moment += std::pow(v, n);
                moment /= kStates * kStates;
            }
            rhs *= std::pow(moment, 1.0 / n);
        }

        const double ratio = rhs == 0.0 ? 0.0 : lhs / rhs;
        report.max_ratio = std::max(report.max_ratio, ratio);
    }
    report.pass = report.max_ratio <= 1.0 + 1e-12;
    return report;
}

}  // namespace nelsonlab
