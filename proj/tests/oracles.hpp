#pragma once

// Test-only oracles, kept independent of the library's computation paths:
// valuations are counted by explicit division on materialized big integers,
// and hulls are built by pairwise minimal-slope search.

#include <cstdint>
#include <map>
#include <vector>

#include "ghost/ghost.hpp"

namespace oracle {

using ghost::BigInt;
using ghost::Rational;

inline std::int64_t vp(BigInt n, std::int64_t p)
{
    if (n < 0) n = -n;
    std::int64_t v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// w_k = (1+2p)^k - 1, materialized
inline BigInt weight_coordinate(std::int64_t k, std::int64_t p)
{
    static std::map<std::pair<std::int64_t, std::int64_t>, BigInt> cache;
    auto key = std::make_pair(k, p);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    BigInt w = 1;
    for (std::int64_t i = 0; i < k; ++i) w *= (1 + 2 * p);
    w -= 1;
    return cache.emplace(key, w).first->second;
}

// v_p of the product over the zero multiset of (w_{k0} - w_k)^m
inline ghost::Valuation product_valuation(const std::vector<ghost::GhostZero>& zeros, std::int64_t k0,
                                          std::int64_t p)
{
    BigInt prod = 1;
    const BigInt w0 = weight_coordinate(k0, p);
    for (const auto& z : zeros) {
        const BigInt diff = w0 - weight_coordinate(z.k, p);
        if (diff == 0) return ghost::Valuation::infinity();
        for (std::int64_t i = 0; i < z.multiplicity; ++i) prod *= diff;
    }
    if (prod == 1 && zeros.empty()) return ghost::Valuation(0);
    return ghost::Valuation(vp(prod, p));
}

struct HullResult {
    std::vector<ghost::PolygonPoint> vertices;
    std::vector<ghost::SlopeRun> slopes;
};

// O(n^2) hull: from each vertex, walk to the later point of minimal chord
// slope, farthest on ties.
inline HullResult brute_force_hull(const std::vector<ghost::PolygonPoint>& points)
{
    std::vector<ghost::PolygonPoint> pts;
    for (const auto& pt : points)
        if (pt.val.finite()) pts.push_back(pt);
    std::sort(pts.begin(), pts.end(), [](const ghost::PolygonPoint& a, const ghost::PolygonPoint& b) {
        return a.index < b.index;
    });

    HullResult out;
    if (pts.empty()) return out;
    std::size_t cur = 0;
    out.vertices.push_back(pts[0]);
    while (cur + 1 < pts.size()) {
        std::size_t best = cur + 1;
        Rational best_slope = (pts[best].val.value() - pts[cur].val.value()) /
                              Rational(pts[best].index - pts[cur].index);
        for (std::size_t j = cur + 2; j < pts.size(); ++j) {
            Rational slope =
                (pts[j].val.value() - pts[cur].val.value()) / Rational(pts[j].index - pts[cur].index);
            if (slope < best_slope || (slope == best_slope && pts[j].index > pts[best].index)) {
                best = j;
                best_slope = slope;
            }
        }
        out.slopes.push_back({best_slope, pts[best].index - pts[cur].index});
        out.vertices.push_back(pts[best]);
        cur = best;
    }
    return out;
}

} // namespace oracle
