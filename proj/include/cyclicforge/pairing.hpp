#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cyclicforge/errors.hpp"
#include "cyclicforge/rng.hpp"

namespace cyclicforge {

/// n disjoint ordered side pairs (a_i, b_i) covering {1..2n}, stored sorted by
/// a_i with a_i < b_i. Construction checks the partition structure; the odd
/// gap condition of the side-pairing theorem is queried separately so the
/// engine can reject even-gap pairings with a proper diagnostic.
class Pairing {
public:
    Pairing(int n, std::vector<std::pair<int, int>> pairs) : n_(n), pairs_(std::move(pairs)) {
        if (n_ < 1 || static_cast<int>(pairs_.size()) != n_)
            throw InvalidPairing("pairing must contain exactly n pairs");
        std::vector<char> seen(2 * n_ + 1, 0);
        for (auto& [a, b] : pairs_) {
            if (a > b) std::swap(a, b);
            if (a < 1 || b > 2 * n_ || a == b)
                throw InvalidPairing("pair indices must be distinct and within 1..2n");
            if (seen[a]++ || seen[b]++)
                throw InvalidPairing("pairing reuses a side index");
        }
        std::sort(pairs_.begin(), pairs_.end());
    }

    int n() const { return n_; }
    int num_sides() const { return 2 * n_; }
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

    /// True iff every gap b_i - a_i is odd (the theorem's hypothesis).
    bool odd_gaps() const {
        for (const auto& [a, b] : pairs_)
            if ((b - a) % 2 == 0) return false;
        return true;
    }

    friend bool operator==(const Pairing& x, const Pairing& y) {
        return x.n_ == y.n_ && x.pairs_ == y.pairs_;
    }
    friend bool operator<(const Pairing& x, const Pairing& y) {
        return x.pairs_ < y.pairs_;
    }

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            if (i) s += ",";
            s += "(" + std::to_string(pairs_[i].first) + "," +
                 std::to_string(pairs_[i].second) + ")";
        }
        return s + "}";
    }

private:
    int n_;
    std::vector<std::pair<int, int>> pairs_;
};

/// All n! valid pairings, one per bijection from odd to even side labels,
/// in lexicographic order of the even-label permutation.
inline std::vector<Pairing> enumerate_pairings(int n) {
    if (n < 2 || n > 8) throw SizeLimit("enumerate_pairings supports 2 <= n <= 8");
    std::vector<int> odds, evens;
    for (int i = 1; i <= 2 * n; i += 2) odds.push_back(i);
    for (int i = 2; i <= 2 * n; i += 2) evens.push_back(i);
    std::vector<Pairing> out;
    std::vector<int> perm = evens;
    do {
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(n);
        for (int k = 0; k < n; ++k) pairs.emplace_back(odds[k], perm[k]);
        out.emplace_back(n, std::move(pairs));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

namespace detail {

inline Pairing apply_side_map(const Pairing& p, const std::vector<int>& image) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(p.n());
    for (const auto& [a, b] : p.pairs()) pairs.emplace_back(image[a], image[b]);
    return Pairing(p.n(), std::move(pairs));
}

}  // namespace detail

/// Representative of the orbit of `p` under the dihedral action on side
/// labels: 2n rotations, each optionally composed with the reflection
/// i -> ((2n - i) mod 2n) + 1. Lexicographic minimum over all 4n images.
inline Pairing canonicalize(const Pairing& p) {
    const int m = p.num_sides();
    Pairing best = p;
    for (int refl = 0; refl < 2; ++refl) {
        for (int k = 0; k < m; ++k) {
            std::vector<int> image(m + 1);
            for (int i = 1; i <= m; ++i) {
                int j = ((i - 1 + k) % m) + 1;
                if (refl) j = ((m - j) % m) + 1;
                image[i] = j;
            }
            Pairing q = detail::apply_side_map(p, image);
            if (q < best) best = q;
        }
    }
    return best;
}

struct PairingOrbit {
    Pairing canonical;
    int size = 0;
};

/// Orbits of all n! pairings under the dihedral action, sorted by canonical
/// representative. Counts for n = 2..7 are 1, 3, 5, 17, 53, 260.
inline std::vector<PairingOrbit> enumerate_orbits(int n) {
    if (n < 2 || n > 7) throw SizeLimit("enumerate_orbits supports 2 <= n <= 7");
    std::map<Pairing, int> orbit_sizes;
    for (const Pairing& p : enumerate_pairings(n)) ++orbit_sizes[canonicalize(p)];
    std::vector<PairingOrbit> out;
    out.reserve(orbit_sizes.size());
    for (const auto& [canon, size] : orbit_sizes) out.push_back({canon, size});
    return out;
}

/// Uniform draw over the n! valid pairings, deterministic per seed.
inline Pairing random_pairing(int n, std::uint64_t seed) {
    if (n < 2) throw SizeLimit("random_pairing needs n >= 2");
    Rng rng(seed);
    std::vector<int> evens;
    for (int i = 2; i <= 2 * n; i += 2) evens.push_back(i);
    for (int i = n - 1; i > 0; --i)
        std::swap(evens[i], evens[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < n; ++k) pairs.emplace_back(2 * k + 1, evens[k]);
    return Pairing(n, std::move(pairs));
}

}  // namespace cyclicforge
