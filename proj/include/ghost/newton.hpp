#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <span>
#include <vector>

#include "json.hpp"

#include "ghost/errors.hpp"
#include "ghost/padic.hpp"
#include "ghost/series.hpp"

namespace ghost {

struct PolygonPoint {
    std::int64_t index = 0;
    Valuation val;

    bool operator==(const PolygonPoint&) const = default;
};

struct SlopeRun {
    Rational slope;
    std::int64_t length = 0;

    bool operator==(const SlopeRun&) const = default;
};

// Lower Newton polygon: the hull vertices (finite valuations, strictly
// increasing indices) and the run-length-encoded non-decreasing slope list.
// Collinear boundary points are merged into a single run.
class NewtonPolygon {
public:
    const std::vector<PolygonPoint>& vertices() const { return vertices_; }
    const std::vector<SlopeRun>& slopes() const { return slopes_; }

    std::int64_t horizontal_length() const
    {
        std::int64_t len = 0;
        for (const auto& run : slopes_) len += run.length;
        return len;
    }

    // Fewer than 2 finite points: no slopes, by convention not an error.
    bool degenerate() const { return slopes_.empty(); }

    bool operator==(const NewtonPolygon&) const = default;

private:
    friend NewtonPolygon lower_hull(std::span<const PolygonPoint>);
    std::vector<PolygonPoint> vertices_;
    std::vector<SlopeRun> slopes_;
};

namespace detail {

// z-component of (a - o) x (b - o), exact.
inline Rational cross(const PolygonPoint& o, const PolygonPoint& a, const PolygonPoint& b)
{
    return Rational(a.index - o.index) * (b.val.value() - o.val.value()) -
           (a.val.value() - o.val.value()) * Rational(b.index - o.index);
}

} // namespace detail

// Lower convex hull of the finite-valuation points by monotone chain.
// Points with +inf valuation are skipped: a vanishing coefficient constrains
// nothing. Requires the point (0, 0) (the constant term 1) and distinct
// indices.
inline NewtonPolygon lower_hull(std::span<const PolygonPoint> points)
{
    std::vector<PolygonPoint> pts;
    pts.reserve(points.size());
    bool have_origin = false;
    for (const auto& pt : points) {
        if (pt.index < 0) fail(Errc::bad_argument, "negative point index");
        if (pt.index == 0) {
            if (!pt.val.finite() || pt.val.value() != 0)
                fail(Errc::missing_origin, "point at index 0 must have valuation 0");
            have_origin = true;
        }
        if (pt.val.finite()) pts.push_back(pt);
    }
    if (!have_origin) fail(Errc::missing_origin, "the point (0, 0) is required");
    std::sort(pts.begin(), pts.end(),
              [](const PolygonPoint& a, const PolygonPoint& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].index == pts[i - 1].index)
            fail(Errc::duplicate_index, "duplicate point index " + std::to_string(pts[i].index));

    std::vector<PolygonPoint> hull;
    for (const auto& pt : pts) {
        // pop while the new point does not make a strict left turn; this also
        // merges collinear boundary points into one segment
        while (hull.size() >= 2 && detail::cross(hull[hull.size() - 2], hull.back(), pt) <= 0)
            hull.pop_back();
        hull.push_back(pt);
    }

    NewtonPolygon np;
    np.vertices_ = std::move(hull);
    for (std::size_t i = 1; i < np.vertices_.size(); ++i) {
        const auto& a = np.vertices_[i - 1];
        const auto& b = np.vertices_[i];
        np.slopes_.push_back(
            {(b.val.value() - a.val.value()) / Rational(b.index - a.index), b.index - a.index});
    }

    // postconditions: non-decreasing slopes, length accounting, and every
    // input point on or above the boundary
    for (std::size_t i = 1; i < np.slopes_.size(); ++i)
        if (np.slopes_[i].slope < np.slopes_[i - 1].slope)
            throw std::logic_error("hull slopes not non-decreasing");
    if (!np.vertices_.empty() && np.horizontal_length() != np.vertices_.back().index)
        throw std::logic_error("hull length accounting is off");
    for (const auto& pt : pts) {
        auto seg = std::lower_bound(np.vertices_.begin(), np.vertices_.end(), pt.index,
                                    [](const PolygonPoint& v, std::int64_t i) { return v.index < i; });
        if (seg == np.vertices_.end()) throw std::logic_error("point beyond hull range");
        if (seg->index == pt.index) {
            if (pt.val.value() < seg->val.value()) throw std::logic_error("point below hull vertex");
            continue;
        }
        const auto& a = *(seg - 1);
        const auto& b = *seg;
        Rational line = a.val.value() + (b.val.value() - a.val.value()) * Rational(pt.index - a.index) /
                                            Rational(b.index - a.index);
        if (pt.val.value() < line) throw std::logic_error("point below hull segment");
    }
    return np;
}

struct EvalOptions {
    bool allow_off_component = false; // arithmetic weights off k = b (mod p-1)
    bool allow_incomplete = false;    // valuations of incomplete coefficients are lower bounds
};

// v_p(g_i(w)) from the symbolic zeros: sum of m * v_p(w - w_k). +inf exactly
// when w is one of the zeros; 0 when the coefficient has none.
inline Valuation coefficient_valuation(const GhostCoefficient& c, const Weight& w, const Prime& p)
{
    Valuation v;
    for (const auto& z : c.zeros) {
        v += vp_weight_difference(w, z.k, p).scaled(z.multiplicity);
        if (!v.finite()) return v;
    }
    return v;
}

// Points (i, v_p(g_i(w))) for i = 0..n, with the constant term pinned at
// (0, 0). Generic weights carry no component information and bypass the
// component check.
inline std::vector<PolygonPoint> evaluate_valuations_prefix(const GhostSeries& g, const Weight& w,
                                                            std::int64_t n, EvalOptions opt = {})
{
    if (n < 0 || n > g.size()) fail(Errc::out_of_range, "coefficient prefix " + std::to_string(n));
    const Prime& p = g.descriptor().p();
    if (w.is_arithmetic() && !opt.allow_off_component) {
        if (detail::pos_mod(w.k() - g.descriptor().b(), p.value() - 1) != 0)
            fail(Errc::off_component_weight,
                 "weight " + std::to_string(w.k()) + " is not congruent to b = " +
                     std::to_string(g.descriptor().b()) + " (mod p-1); pass the off-component override");
    }
    std::vector<PolygonPoint> pts;
    pts.reserve(static_cast<std::size_t>(n) + 1);
    pts.push_back({0, Valuation(0)});
    for (std::int64_t i = 1; i <= n; ++i) {
        const auto& c = g.coefficient(i);
        if (!c.complete && !opt.allow_incomplete)
            fail(Errc::incomplete_coefficient,
                 "coefficient " + std::to_string(c.index) + " is not complete at the table's k_max");
        pts.push_back({c.index, coefficient_valuation(c, w, p)});
    }
    return pts;
}

inline std::vector<PolygonPoint> evaluate_valuations(const GhostSeries& g, const Weight& w,
                                                     EvalOptions opt = {})
{
    return evaluate_valuations_prefix(g, w, g.size(), opt);
}

inline NewtonPolygon ghost_polygon(const GhostSeries& g, const Weight& w, EvalOptions opt = {})
{
    const auto pts = evaluate_valuations(g, w, opt);
    return lower_hull(pts);
}

// First `count` slopes with multiplicity, non-decreasing.
inline std::vector<Rational> first_slopes(const NewtonPolygon& np, std::int64_t count)
{
    if (count < 0) fail(Errc::bad_argument, "negative slope count");
    if (np.horizontal_length() < count)
        fail(Errc::insufficient_length, "polygon has horizontal length " +
                                            std::to_string(np.horizontal_length()) + " < " +
                                            std::to_string(count));
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(count));
    for (const auto& run : np.slopes()) {
        for (std::int64_t i = 0; i < run.length && static_cast<std::int64_t>(out.size()) < count; ++i)
            out.push_back(run.slope);
        if (static_cast<std::int64_t>(out.size()) == count) break;
    }
    return out;
}

inline std::vector<Rational> all_slopes(const NewtonPolygon& np)
{
    return first_slopes(np, np.horizontal_length());
}

inline void write_polygon_table(std::ostream& os, const NewtonPolygon& np)
{
    os << "vertices:\n";
    for (const auto& v : np.vertices())
        os << "  " << std::setw(6) << v.index << "  " << v.val.str() << "\n";
    os << "slopes (slope x length):\n";
    if (np.degenerate()) {
        os << "  (degenerate polygon)\n";
        return;
    }
    for (const auto& run : np.slopes())
        os << "  " << to_string(run.slope) << " x " << run.length << "\n";
}

inline nlohmann::json polygon_to_json(const NewtonPolygon& np)
{
    nlohmann::json j;
    auto& jv = j["vertices"] = nlohmann::json::array();
    for (const auto& v : np.vertices()) jv.push_back({v.index, v.val.str()});
    auto& js = j["slopes"] = nlohmann::json::array();
    for (const auto& run : np.slopes()) js.push_back({to_string(run.slope), run.length});
    return j;
}

// Two-column points file for external plotting. Values are printed as
// doubles here only; the JSON format carries the exact rationals. Points at
// +inf are skipped.
inline void write_polygon_points(std::ostream& os, std::span<const PolygonPoint> points)
{
    os << "# index valuation\n";
    for (const auto& pt : points) {
        if (!pt.val.finite()) continue;
        os << pt.index << " " << std::setprecision(17)
           << pt.val.value().template convert_to<double>() << "\n";
    }
}

} // namespace ghost
