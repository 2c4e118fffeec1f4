#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ghost/dimension_table.hpp"
#include "ghost/errors.hpp"
#include "ghost/local_rep.hpp"
#include "ghost/newton.hpp"
#include "ghost/series.hpp"
#include "ghost/slope_data.hpp"

namespace ghost {

// Outcome of a verification check. Falsified verdicts always carry a witness
// weight and the slope-level mismatch; the exit codes are the CLI contract.
struct Verdict {
    enum class Status { consistent, falsified, inconclusive };

    Status status = Status::inconclusive;
    std::string headline;
    std::vector<std::string> evidence;
    std::optional<std::int64_t> witness_weight;
    std::optional<Rational> witness_ghost_slope;
    std::optional<Rational> witness_classical_slope;

    int exit_code() const
    {
        switch (status) {
            case Status::consistent: return 0;
            case Status::falsified: return 2;
            case Status::inconclusive: return 3;
        }
        return 3;
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        switch (status) {
            case Status::consistent: j["status"] = "consistent"; break;
            case Status::falsified: j["status"] = "falsified"; break;
            case Status::inconclusive: j["status"] = "inconclusive"; break;
        }
        j["headline"] = headline;
        j["evidence"] = evidence;
        if (witness_weight) j["weight"] = *witness_weight;
        if (witness_ghost_slope) j["ghost_slope"] = to_string(*witness_ghost_slope);
        if (witness_classical_slope) j["classical_slope"] = to_string(*witness_classical_slope);
        return j;
    }
};

namespace detail {

inline Verdict falsified(std::string headline, std::string witness_line, std::int64_t weight,
                         std::optional<Rational> ghost_slope, std::optional<Rational> classical_slope)
{
    Verdict v;
    v.status = Verdict::Status::falsified;
    v.headline = std::move(headline);
    v.evidence.push_back(std::move(witness_line));
    v.witness_weight = weight;
    v.witness_ghost_slope = std::move(ghost_slope);
    v.witness_classical_slope = std::move(classical_slope);
    return v;
}

inline void stamp_provenance(Verdict& v, const GhostSeries& g)
{
    if (auto from = g.first_extrapolated_k())
        v.evidence.push_back("note: dimension table extrapolated from k = " + std::to_string(*from));
    if (g.descriptor().p().outside_conjecture_range())
        v.evidence.push_back("note: p = " + std::to_string(g.descriptor().p().value()) +
                             " is outside the conjecture's stated range");
}

inline std::string multiset_str(std::span<const Rational> v)
{
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += to_string(v[i]);
    }
    return out + "}";
}

// first element of sorted `a` missing from sorted `b` (multiset sense)
inline std::optional<Rational> first_unmatched(std::span<const Rational> a, std::span<const Rational> b)
{
    std::size_t i = 0, j = 0;
    while (i < a.size()) {
        if (j == b.size() || a[i] < b[j]) return a[i];
        if (a[i] == b[j]) ++i;
        ++j;
    }
    return std::nullopt;
}

inline NewtonPolygon complete_prefix_polygon(const GhostSeries& g, std::int64_t k)
{
    const auto pts =
        evaluate_valuations_prefix(g, Weight::arithmetic(k), g.complete_prefix(), EvalOptions{});
    return lower_hull(pts);
}

} // namespace detail

// The conjecture's comparison contract at classical weights: for each
// requested k, the first d(k) slopes of the ghost polygon at w_k must equal
// the classical T_p slope multiset.
inline Verdict compare_classical(const GhostSeries& g, const DimensionTable& t, const SlopeDataset& s,
                                 std::span<const std::int64_t> weights)
{
    if (s.flavor() != SlopeFlavor::tp_level_n)
        fail(Errc::flavor_mismatch, "compare takes T_p data; U_p data feeds the classicality and "
                                    "falsification checks only");
    s.validate_against(t);
    Verdict verdict;
    std::int64_t compared = 0;
    for (const std::int64_t k : weights) {
        if (!t.has_row(k)) fail(Errc::coverage_gap, "table does not cover weight " + std::to_string(k));
        const std::vector<Rational>& classical = s.slopes_at(k);
        const std::int64_t d = t.row(k).d;
        if (g.complete_prefix() < d)
            fail(Errc::incomplete_coefficient, "ghost series is complete only through index " +
                                                   std::to_string(g.complete_prefix()) + " < d(" +
                                                   std::to_string(k) + ") = " + std::to_string(d));
        const auto ghost_pred = first_slopes(detail::complete_prefix_polygon(g, k), d);
        if (ghost_pred != classical) {
            auto bad_ghost = detail::first_unmatched(ghost_pred, classical);
            auto bad_classical = detail::first_unmatched(classical, ghost_pred);
            Verdict v = detail::falsified(
                "falsified",
                "weight " + std::to_string(k) + ": ghost predicts " + detail::multiset_str(ghost_pred) +
                    " but classical T_p slopes are " + detail::multiset_str(classical),
                k, bad_ghost, bad_classical);
            detail::stamp_provenance(v, g);
            return v;
        }
        verdict.evidence.push_back("weight " + std::to_string(k) + ": " + std::to_string(d) +
                                   " slope(s) match " + detail::multiset_str(ghost_pred));
        ++compared;
    }
    verdict.status = Verdict::Status::consistent;
    verdict.headline = "consistent across " + std::to_string(compared) + " weight(s)";
    detail::stamp_provenance(verdict, g);
    return verdict;
}

// Classicality cross-check against U_p data in one weight k: an overconvergent
// slope strictly below k-1 belongs to a classical form, so every ghost slope
// below the cutoff must appear among the classical U_p slopes. When the ghost
// polygon resolves all d_p(k) steps the two multisets must agree below the
// cutoff exactly. The strict cutoff is a convention; see the docs.
inline Verdict coleman_consistency(const GhostSeries& g, const DimensionTable& t, const SlopeDataset& s,
                                   std::int64_t k)
{
    if (s.flavor() != SlopeFlavor::up_level_np)
        fail(Errc::flavor_mismatch, "the classicality check takes U_p data");
    s.validate_against(t);
    const std::vector<Rational>& classical = s.slopes_at(k);
    if (g.complete_prefix() < 1)
        fail(Errc::incomplete_coefficient, "no complete ghost coefficients to work with");

    const Rational cutoff(k - 1);
    const NewtonPolygon np = detail::complete_prefix_polygon(g, k);
    std::vector<Rational> ghost_small;
    for (const auto& slope : all_slopes(np))
        if (slope < cutoff) ghost_small.push_back(slope);
    std::vector<Rational> classical_small;
    for (const auto& slope : classical)
        if (slope < cutoff) classical_small.push_back(slope);

    if (auto missing = detail::first_unmatched(ghost_small, classical_small)) {
        Verdict v = detail::falsified(
            "falsified",
            "weight " + std::to_string(k) + ": ghost slope " + to_string(*missing) +
                " lies below the classicality cutoff " + to_string(cutoff) +
                " but is missing from the classical U_p slopes " + detail::multiset_str(classical) +
                (classical.empty() ? "" : " (min classical " + to_string(classical.front()) + ")"),
            k, *missing, classical.empty() ? std::optional<Rational>{} : classical.front());
        detail::stamp_provenance(v, g);
        return v;
    }
    const std::int64_t dp = t.has_row(k) ? t.row(k).dp : static_cast<std::int64_t>(classical.size());
    if (np.horizontal_length() >= dp) {
        if (auto extra = detail::first_unmatched(classical_small, ghost_small)) {
            Verdict v = detail::falsified(
                "falsified",
                "weight " + std::to_string(k) + ": classical slope " + to_string(*extra) +
                    " below the cutoff " + to_string(cutoff) + " has no ghost match; ghost sub-cutoff slopes " +
                    detail::multiset_str(ghost_small),
                k, std::nullopt, *extra);
            detail::stamp_provenance(v, g);
            return v;
        }
    }
    Verdict v;
    v.status = Verdict::Status::consistent;
    v.headline = "consistent at weight " + std::to_string(k);
    v.evidence.push_back("ghost slopes below the cutoff " + to_string(cutoff) + ": " +
                         detail::multiset_str(ghost_small) +
                         (np.horizontal_length() >= dp ? " (full comparison)" : " (sub-multiset comparison)"));
    detail::stamp_provenance(v, g);
    return v;
}

// Decides regularity from twist-aggregated low-weight T_p slopes: regular iff
// every slope in weights 2..p+1 is 0 and every slope in weight p+2 is 0 or
// exactly 1. For p >= 3 this is an exact criterion, so the verdict is
// two-sided.
inline Verdict regularity_from_slopes(const SlopeDataset& s, const Prime& p)
{
    if (s.flavor() != SlopeFlavor::tp_level_n)
        fail(Errc::flavor_mismatch, "the regularity criterion reads T_p slopes");
    for (std::int64_t k = 2; k <= p.value() + 2; ++k)
        if (!s.has_weight(k))
            fail(Errc::coverage_gap,
                 "regularity needs twist-aggregated entries for every weight in [2, p+2]; missing " +
                     std::to_string(k));

    for (std::int64_t k = 2; k <= p.value() + 1; ++k) {
        for (const auto& slope : s.slopes_at(k)) {
            if (slope != 0) {
                Verdict v = detail::falsified(
                    "irregular",
                    "weight " + std::to_string(k) + " carries the non-ordinary slope " + to_string(slope) +
                        "; weights 2..p+1 must be entirely ordinary",
                    k, std::nullopt, slope);
                return v;
            }
        }
    }
    for (const auto& slope : s.slopes_at(p.value() + 2)) {
        if (slope != 0 && slope != 1) {
            Verdict v = detail::falsified(
                "irregular",
                "weight p+2 = " + std::to_string(p.value() + 2) + " carries the slope " + to_string(slope) +
                    "; only 0 and exactly 1 are allowed there",
                p.value() + 2, std::nullopt, slope);
            return v;
        }
    }
    Verdict v;
    v.status = Verdict::Status::consistent;
    v.headline = "regular";
    v.evidence.push_back("weights 2.." + std::to_string(p.value() + 1) + " all ordinary; weight " +
                         std::to_string(p.value() + 2) + " slopes all 0 or exactly 1");
    v.evidence.push_back("p >= 3, so the low-weight criterion decides regularity in both directions");
    return v;
}

// Falsification detectors for an irregular representation. Both are
// one-directional: firing proves the ghost series wrong for this twist,
// not firing proves nothing.
//   (i)  irreducible flavor: the first d(b) ghost slopes at w_b are 0 by the
//        ordinary-prefix structure, so a nonzero classical slope in weight b
//        is a contradiction;
//   (ii) reducible flavor: g_1(w_{p+2}) != 0 forces the ghost's least slope
//        at w_{p+2} to be at most 1, so classical slopes all exceeding 1 are
//        a contradiction.
inline Verdict prop33_falsifier(const GhostSeries& g, const DimensionTable& t, const LocalRep& r,
                                const SlopeDataset& s)
{
    const Classification cls = is_irregular(r);
    if (!cls.irregular) {
        Verdict v;
        v.status = Verdict::Status::inconclusive;
        v.headline = "not applicable";
        v.evidence.push_back("representation is regular (" + cls.witness + "); the detectors only "
                             "apply to irregular representations");
        return v;
    }
    const std::int64_t p = t.descriptor().p().value();
    const std::int64_t b = t.descriptor().b();
    if (b_of(r) != b)
        fail(Errc::bad_argument, "representation has b = " + std::to_string(b_of(r)) +
                                     " but the table's component is b = " + std::to_string(b) +
                                     "; run the detectors on the matching twist");
    s.validate_against(t);

    std::vector<std::string> notes;
    notes.push_back("representation is irregular (" + cls.witness + ")");

    // (i)
    const std::int64_t d_b = t.rows().front().d;
    if (d_b >= 1) {
        if (!s.has_weight(b))
            fail(Errc::coverage_gap, "detector (i) needs slopes in weight b = " + std::to_string(b));
        // structural sanity: monotone d starting at d(b) means no zeros below
        // index d(b)+1, hence an all-zero slope prefix of length d(b)
        for (std::int64_t i = 1; i <= std::min(d_b, g.size()); ++i)
            if (!g.coefficient(i).zeros.empty())
                throw std::logic_error("ordinary-prefix structure violated");
        const auto& classical = s.slopes_at(b);
        if (static_cast<std::int64_t>(classical.size()) < d_b)
            fail(Errc::dataset_invariant, "weight b = " + std::to_string(b) + " needs at least d(b) = " +
                                              std::to_string(d_b) + " slopes");
        for (std::int64_t i = 0; i < d_b; ++i) {
            if (classical[static_cast<std::size_t>(i)] != 0) {
                Verdict v = detail::falsified(
                    "falsified",
                    "detector (i): ghost forces the first " + std::to_string(d_b) + " slope(s) at w_" +
                        std::to_string(b) + " to be 0, but weight " + std::to_string(b) +
                        " carries the nonzero classical slope " +
                        to_string(classical[static_cast<std::size_t>(i)]),
                    b, Rational(0), classical[static_cast<std::size_t>(i)]);
                v.evidence.insert(v.evidence.begin(), notes.begin(), notes.end());
                detail::stamp_provenance(v, g);
                return v;
            }
        }
        notes.push_back("detector (i) did not fire: first d(b) classical slopes in weight " +
                        std::to_string(b) + " are all 0");
    } else {
        notes.push_back("detector (i) inapplicable: d(b) = 0");
    }

    // (ii)
    const std::int64_t kp2 = p + 2;
    const bool on_component = detail::pos_mod(kp2 - b, p - 1) == 0;
    if (on_component && t.has_row(kp2) && t.row(kp2).d >= 1) {
        if (!s.has_weight(kp2))
            fail(Errc::coverage_gap, "detector (ii) needs slopes in weight p+2 = " + std::to_string(kp2));
        if (g.complete_prefix() < 1)
            fail(Errc::incomplete_coefficient, "detector (ii) needs at least one complete coefficient");
        const NewtonPolygon np = detail::complete_prefix_polygon(g, kp2);
        const Rational least = first_slopes(np, 1).front();
        const auto& classical = s.slopes_at(kp2);
        if (classical.empty()) fail(Errc::dataset_invariant, "empty slope list in weight p+2");
        const Rational classical_min = classical.front();
        if (least <= 1 && classical_min > 1) {
            Verdict v = detail::falsified("falsified",
                                          "detector (ii): ghost least slope " + to_string(least) +
                                              " <= 1 at w_" + std::to_string(kp2) + " vs min classical " +
                                              to_string(classical_min) + " > 1",
                                          kp2, least, classical_min);
            v.evidence.insert(v.evidence.begin(), notes.begin(), notes.end());
            detail::stamp_provenance(v, g);
            return v;
        }
        notes.push_back("detector (ii) did not fire: ghost least slope " + to_string(least) +
                        ", min classical " + to_string(classical_min));
    } else {
        notes.push_back("detector (ii) inapplicable: no p-new-capable row at weight p+2 on this component");
    }

    Verdict v;
    v.status = Verdict::Status::inconclusive;
    v.headline = "inconclusive";
    v.evidence = std::move(notes);
    v.evidence.push_back("the detectors are one-directional; no contradiction surfaced in this data");
    detail::stamp_provenance(v, g);
    return v;
}

// The multiplicity-stability prediction for one slope h at two weights:
// applicable when k, k2 >= 2h+2 and k = k2 (mod (p-1) p^ceil(h)), in which
// case the multiplicity of h must agree.
inline Verdict gouvea_mazur_check(const SlopeDataset& s, std::int64_t k, std::int64_t k2,
                                  const Rational& h, const Prime& p)
{
    if (h < 0) fail(Errc::bad_argument, "slope h must be >= 0");
    const auto& at_k = s.slopes_at(k);
    const auto& at_k2 = s.slopes_at(k2);

    const Rational bound = 2 * h + 2;
    if (Rational(k) < bound || Rational(k2) < bound) {
        Verdict v;
        v.status = Verdict::Status::inconclusive;
        v.headline = "inapplicable";
        v.evidence.push_back("requires k, k' >= 2h+2 = " + to_string(bound) + "; got k = " +
                             std::to_string(k) + ", k' = " + std::to_string(k2));
        return v;
    }
    BigInt modulus(p.value() - 1);
    const BigInt ceil_h = rational_ceil(h);
    for (BigInt i = 0; i < ceil_h; ++i) modulus *= p.value();
    if (BigInt(k - k2) % modulus != 0) {
        Verdict v;
        v.status = Verdict::Status::inconclusive;
        v.headline = "inapplicable";
        v.evidence.push_back("requires k = k' (mod (p-1)p^ceil(h) = " + modulus.str() + "); got k - k' = " +
                             std::to_string(k - k2));
        return v;
    }

    const auto mult = [&](const std::vector<Rational>& slopes) {
        return static_cast<std::int64_t>(std::count(slopes.begin(), slopes.end(), h));
    };
    const std::int64_t m1 = mult(at_k);
    const std::int64_t m2 = mult(at_k2);
    if (m1 != m2) {
        Verdict v = detail::falsified("GM violated",
                                      "slope " + to_string(h) + " has multiplicity " + std::to_string(m1) +
                                          " in weight " + std::to_string(k) + " but multiplicity " +
                                          std::to_string(m2) + " in weight " + std::to_string(k2),
                                      k, std::nullopt, h);
        return v;
    }
    Verdict v;
    v.status = Verdict::Status::consistent;
    v.headline = "consistent";
    v.evidence.push_back("slope " + to_string(h) + " has multiplicity " + std::to_string(m1) +
                         " at both weights");
    return v;
}

} // namespace ghost
