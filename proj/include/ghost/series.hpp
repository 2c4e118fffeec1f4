#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

#include "ghost/dimension_table.hpp"
#include "ghost/errors.hpp"

namespace ghost {

struct GhostZero {
    std::int64_t k = 0;
    std::int64_t multiplicity = 0;

    bool operator==(const GhostZero&) const = default;
};

// Coefficient i of the ghost series, stored symbolically as its multiset of
// zeros (w - w_k)^m. `complete` means the source table provably covers every
// weight that can contribute a zero: once the last row has d >= i, monotone d
// rules out contributions from any higher weight.
struct GhostCoefficient {
    std::int64_t index = 0;
    std::vector<GhostZero> zeros; // sorted by k
    bool complete = false;

    bool operator==(const GhostCoefficient&) const = default;
};

class GhostSeries {
public:
    GhostSeries(RhobarDescriptor desc, std::vector<GhostCoefficient> coefficients,
                std::optional<std::int64_t> first_extrapolated_k)
        : desc_(std::move(desc)), coeffs_(std::move(coefficients)), first_extrapolated_k_(first_extrapolated_k)
    {
    }

    const RhobarDescriptor& descriptor() const { return desc_; }
    std::int64_t size() const { return static_cast<std::int64_t>(coeffs_.size()); }
    const std::vector<GhostCoefficient>& coefficients() const { return coeffs_; }

    const GhostCoefficient& coefficient(std::int64_t i) const
    {
        if (i < 1 || i > size()) fail(Errc::out_of_range, "coefficient index " + std::to_string(i));
        return coeffs_[static_cast<std::size_t>(i - 1)];
    }

    // Largest n such that coefficients 1..n are all complete.
    std::int64_t complete_prefix() const
    {
        std::int64_t n = 0;
        for (const auto& c : coeffs_) {
            if (!c.complete) break;
            ++n;
        }
        return n;
    }

    std::optional<std::int64_t> first_extrapolated_k() const { return first_extrapolated_k_; }

    bool operator==(const GhostSeries& o) const
    {
        return desc_ == o.desc_ && coeffs_ == o.coeffs_ && first_extrapolated_k_ == o.first_extrapolated_k_;
    }

private:
    RhobarDescriptor desc_;
    std::vector<GhostCoefficient> coeffs_;
    std::optional<std::int64_t> first_extrapolated_k_;
};

// Coefficients 1..n of the ghost series of a dimension table. w_k is a zero
// of g_i exactly when d(k) < i < d(k) + dp_new(k), with multiplicity
// min(i - d, d + dp_new - i): the 1, 2, ..., 2, 1 pattern across the block of
// consecutive indices sharing the zero.
inline GhostSeries build_ghost(const DimensionTable& t, std::int64_t n, bool require_complete = false)
{
    if (n < 1) fail(Errc::bad_argument, "need n >= 1 coefficients");
    const std::int64_t d_last = t.rows().back().d;
    if (require_complete && d_last < n)
        fail(Errc::table_too_short, "coefficient " + std::to_string(n) +
                                        " cannot be marked complete: table ends with d = " +
                                        std::to_string(d_last));
    std::vector<GhostCoefficient> coeffs;
    coeffs.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 1; i <= n; ++i) {
        GhostCoefficient c;
        c.index = i;
        for (const auto& r : t.rows()) {
            if (r.d < i && i < r.d + r.dp_new()) {
                const std::int64_t m = std::min(i - r.d, r.d + r.dp_new() - i);
                c.zeros.push_back({r.k, m});
            }
        }
        c.complete = d_last >= i;
        coeffs.push_back(std::move(c));
    }
    return GhostSeries(t.descriptor(), std::move(coeffs), t.first_extrapolated_k());
}

// Multiplicity of w_k as a zero of g_i for i = 1, ..., d + dp_new - 1:
// d leading zeros, then the palindromic block 1, 2, ..., 2, 1 of length
// dp_new - 1. Rows with dp_new <= 1 contribute nothing anywhere.
inline std::vector<std::int64_t> multiplicity_profile(const DimensionTable& t, std::int64_t k)
{
    const DimensionRow& r = t.row(k);
    const std::int64_t len = std::max<std::int64_t>(r.d + r.dp_new() - 1, 0);
    std::vector<std::int64_t> profile(static_cast<std::size_t>(len), 0);
    for (std::int64_t i = r.d + 1; i < r.d + r.dp_new(); ++i)
        profile[static_cast<std::size_t>(i - 1)] = std::min(i - r.d, r.d + r.dp_new() - i);
    return profile;
}

inline nlohmann::json serialize_series(const GhostSeries& g)
{
    nlohmann::json j;
    j["descriptor"] = detail::descriptor_to_json(g.descriptor());
    auto& jc = j["coefficients"] = nlohmann::json::array();
    for (const auto& c : g.coefficients()) {
        nlohmann::json one;
        one["i"] = c.index;
        auto& jz = one["zeros"] = nlohmann::json::array();
        for (const auto& z : c.zeros) jz.push_back({z.k, z.multiplicity});
        one["complete"] = c.complete;
        jc.push_back(std::move(one));
    }
    if (auto from = g.first_extrapolated_k()) j["extrapolated_from"] = *from;
    return j;
}

inline GhostSeries parse_series(const nlohmann::json& j, bool allow_small_prime = false)
{
    detail::require_keys(j, {"descriptor", "coefficients"}, "ghost series");
    RhobarDescriptor desc = detail::descriptor_from_json(j.at("descriptor"), allow_small_prime);
    std::vector<GhostCoefficient> coeffs;
    for (const auto& jc : j.at("coefficients")) {
        detail::require_keys(jc, {"i", "zeros", "complete"}, "coefficient");
        GhostCoefficient c;
        c.index = detail::int_field(jc, "i");
        if (c.index != static_cast<std::int64_t>(coeffs.size()) + 1)
            fail(Errc::schema_violation, "coefficient indices must run 1, 2, ...");
        for (const auto& jz : jc.at("zeros")) {
            if (!jz.is_array() || jz.size() != 2)
                fail(Errc::schema_violation, "each zero must be a [k, multiplicity] pair");
            GhostZero z{jz[0].get<std::int64_t>(), jz[1].get<std::int64_t>()};
            if (z.multiplicity < 1) fail(Errc::schema_violation, "zero multiplicity must be >= 1");
            if (!c.zeros.empty() && c.zeros.back().k >= z.k)
                fail(Errc::schema_violation, "zeros must be sorted by strictly increasing k");
            c.zeros.push_back(z);
        }
        c.complete = jc.at("complete").get<bool>();
        coeffs.push_back(std::move(c));
    }
    std::optional<std::int64_t> from;
    if (j.contains("extrapolated_from")) from = detail::int_field(j, "extrapolated_from");
    return GhostSeries(std::move(desc), std::move(coeffs), from);
}

inline GhostSeries parse_series(const std::string& json_text, bool allow_small_prime = false)
{
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) fail(Errc::schema_violation, "ghost series file is not valid JSON");
    return parse_series(j, allow_small_prime);
}

} // namespace ghost
