#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ghost/errors.hpp"
#include "ghost/padic.hpp"

namespace ghost {

// Identifies one twist of a mod-p representation family: the prime, the tame
// level N (prime to p), the weight-space component b with det|_I = omega^{b-1},
// and the twist index within the omega-twist family.
class RhobarDescriptor {
public:
    RhobarDescriptor(std::string label, Prime p, std::int64_t level, std::int64_t b,
                     std::int64_t twist_index, std::string notes = "")
        : label_(std::move(label)), p_(p), level_(level), b_(b), notes_(std::move(notes))
    {
        if (level_ < 1) fail(Errc::bad_descriptor, "level N must be >= 1");
        if (std::gcd(level_, p_.value()) != 1)
            fail(Errc::bad_descriptor, "level N = " + std::to_string(level_) + " is not prime to p");
        if (b_ < 2 || b_ > p_.value())
            fail(Errc::bad_descriptor, "component b = " + std::to_string(b_) + " outside [2, p]");
        twist_index_ = detail::pos_mod(twist_index, p_.value() - 1);
    }

    const std::string& label() const { return label_; }
    const Prime& p() const { return p_; }
    std::int64_t level() const { return level_; }
    std::int64_t b() const { return b_; }
    std::int64_t twist_index() const { return twist_index_; }
    const std::string& notes() const { return notes_; }

    bool operator==(const RhobarDescriptor& o) const
    {
        return label_ == o.label_ && p_ == o.p_ && level_ == o.level_ && b_ == o.b_ &&
               twist_index_ == o.twist_index_ && notes_ == o.notes_;
    }

private:
    std::string label_;
    Prime p_;
    std::int64_t level_;
    std::int64_t b_;
    std::int64_t twist_index_ = 0;
    std::string notes_;
};

// One weight's dimension data: d = dim of the isotypic cuspform space at
// level N, dp = the same at level Np. dp_new = dp - 2d counts p-new forms.
struct DimensionRow {
    std::int64_t k = 0;
    std::int64_t d = 0;
    std::int64_t dp = 0;
    bool extrapolated = false;

    std::int64_t dp_new() const { return dp - 2 * d; }

    bool operator==(const DimensionRow&) const = default;
};

// Validated dimension data for one twist: rows cover the progression
// k = b, b+(p-1), b+2(p-1), ... up to k_max with no gaps, and d is
// non-decreasing along it.
class DimensionTable {
public:
    DimensionTable(RhobarDescriptor descriptor, std::vector<DimensionRow> rows)
        : desc_(std::move(descriptor)), rows_(std::move(rows))
    {
        validate();
    }

    const RhobarDescriptor& descriptor() const { return desc_; }
    const std::vector<DimensionRow>& rows() const { return rows_; }
    std::int64_t k_min() const { return rows_.front().k; }
    std::int64_t k_max() const { return rows_.back().k; }

    bool has_row(std::int64_t k) const
    {
        const std::int64_t step = desc_.p().value() - 1;
        return k >= k_min() && k <= k_max() && (k - k_min()) % step == 0;
    }

    const DimensionRow& row(std::int64_t k) const
    {
        if (!has_row(k)) fail(Errc::unknown_weight, "weight " + std::to_string(k) + " is not a table row");
        return rows_[static_cast<std::size_t>((k - k_min()) / (desc_.p().value() - 1))];
    }

    std::optional<std::int64_t> first_extrapolated_k() const
    {
        for (const auto& r : rows_)
            if (r.extrapolated) return r.k;
        return std::nullopt;
    }

    bool operator==(const DimensionTable& o) const { return desc_ == o.desc_ && rows_ == o.rows_; }

private:
    void validate() const
    {
        if (rows_.empty()) fail(Errc::empty_table, "table has no rows");
        const std::int64_t p = desc_.p().value();
        const std::int64_t b = desc_.b();
        for (const auto& r : rows_) {
            if (r.k < 2) fail(Errc::schema_violation, "row weight " + std::to_string(r.k) + " < 2");
            if (r.d < 0 || r.dp < 0) fail(Errc::schema_violation, "negative dimension in row k = " + std::to_string(r.k));
            if (detail::pos_mod(r.k - b, p - 1) != 0) {
                if (r.d != 0)
                    fail(Errc::off_component_row,
                         "row k = " + std::to_string(r.k) + " has d != 0 but k != b (mod p-1)");
                fail(Errc::progression_gap,
                     "row k = " + std::to_string(r.k) + " is off the k = b (mod p-1) progression");
            }
            if (r.dp_new() < 0)
                fail(Errc::negative_new_dimension,
                     "row k = " + std::to_string(r.k) + " has d_p - 2d = " + std::to_string(r.dp_new()) + " < 0");
        }
        if (rows_.front().k != b)
            fail(Errc::progression_gap, "table must start at the least component weight k = " +
                                            std::to_string(b) + ", found k = " + std::to_string(rows_.front().k));
        for (std::size_t i = 1; i < rows_.size(); ++i) {
            if (rows_[i].k == rows_[i - 1].k)
                fail(Errc::progression_gap, "duplicate row k = " + std::to_string(rows_[i].k));
            if (rows_[i].k != rows_[i - 1].k + (p - 1))
                fail(Errc::progression_gap, "gap between rows k = " + std::to_string(rows_[i - 1].k) +
                                                " and k = " + std::to_string(rows_[i].k));
            if (rows_[i].d < rows_[i - 1].d)
                fail(Errc::nonmonotone_dimension,
                     "d decreases from row k = " + std::to_string(rows_[i - 1].k) + " to k = " +
                         std::to_string(rows_[i].k));
        }
    }

    RhobarDescriptor desc_;
    std::vector<DimensionRow> rows_;
};

namespace detail {

inline void require_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
                         const std::string& what)
{
    if (!j.is_object()) fail(Errc::schema_violation, what + " must be a JSON object");
    for (const char* k : keys)
        if (!j.contains(k)) fail(Errc::schema_violation, what + " is missing key \"" + k + "\"");
}

inline std::int64_t int_field(const nlohmann::json& j, const char* key)
{
    if (!j.at(key).is_number_integer())
        fail(Errc::schema_violation, std::string("key \"") + key + "\" must be an integer");
    return j.at(key).get<std::int64_t>();
}

inline RhobarDescriptor descriptor_from_json(const nlohmann::json& j, bool allow_small_prime)
{
    require_keys(j, {"p", "N", "b", "twist_index", "label"}, "descriptor");
    Prime p(int_field(j, "p"), allow_small_prime);
    std::string notes = j.contains("notes") ? j.at("notes").get<std::string>() : "";
    return RhobarDescriptor(j.at("label").get<std::string>(), p, int_field(j, "N"), int_field(j, "b"),
                            int_field(j, "twist_index"), std::move(notes));
}

inline nlohmann::json descriptor_to_json(const RhobarDescriptor& d)
{
    nlohmann::json j;
    j["label"] = d.label();
    j["p"] = d.p().value();
    j["N"] = d.level();
    j["b"] = d.b();
    j["twist_index"] = d.twist_index();
    if (!d.notes().empty()) j["notes"] = d.notes();
    return j;
}

inline std::vector<DimensionRow> rows_from_json(const nlohmann::json& jrows)
{
    if (!jrows.is_array()) fail(Errc::schema_violation, "\"rows\" must be an array of [k, d, d_p] triples");
    std::vector<DimensionRow> rows;
    rows.reserve(jrows.size());
    for (const auto& jr : jrows) {
        if (!jr.is_array() || jr.size() != 3)
            fail(Errc::schema_violation, "each row must be a [k, d, d_p] triple; d_p_new is derived, never stored");
        for (const auto& v : jr)
            if (!v.is_number_integer()) fail(Errc::schema_violation, "row entries must be integers");
        rows.push_back({jr[0].get<std::int64_t>(), jr[1].get<std::int64_t>(), jr[2].get<std::int64_t>(), false});
    }
    std::sort(rows.begin(), rows.end(),
              [](const DimensionRow& a, const DimensionRow& b) { return a.k < b.k; });
    return rows;
}

} // namespace detail

inline DimensionTable ingest_table(const nlohmann::json& j, bool allow_small_prime = false)
{
    RhobarDescriptor desc = detail::descriptor_from_json(j, allow_small_prime);
    detail::require_keys(j, {"rows"}, "table");
    auto rows = detail::rows_from_json(j.at("rows"));
    if (j.contains("extrapolated_from")) {
        const std::int64_t from = detail::int_field(j, "extrapolated_from");
        for (auto& r : rows) r.extrapolated = r.k >= from;
    }
    return DimensionTable(std::move(desc), std::move(rows));
}

inline DimensionTable ingest_table(const std::string& json_text, bool allow_small_prime = false)
{
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) fail(Errc::schema_violation, "table file is not valid JSON");
    return ingest_table(j, allow_small_prime);
}

inline nlohmann::json serialize_table(const DimensionTable& t)
{
    nlohmann::json j = detail::descriptor_to_json(t.descriptor());
    auto& jrows = j["rows"] = nlohmann::json::array();
    for (const auto& r : t.rows()) jrows.push_back({r.k, r.d, r.dp});
    if (auto from = t.first_extrapolated_k()) j["extrapolated_from"] = *from;
    return j;
}

// Family file: one table per twist index, sharing p and N.
inline std::vector<DimensionTable> ingest_family(const nlohmann::json& j, bool allow_small_prime = false)
{
    detail::require_keys(j, {"p", "N", "tables"}, "family");
    const std::int64_t p = detail::int_field(j, "p");
    const std::int64_t level = detail::int_field(j, "N");
    if (!j.at("tables").is_array() || j.at("tables").empty())
        fail(Errc::schema_violation, "\"tables\" must be a non-empty array");
    std::vector<DimensionTable> out;
    std::vector<bool> seen(static_cast<std::size_t>(p - 1), false);
    for (const auto& jt : j.at("tables")) {
        nlohmann::json full = jt;
        full["p"] = p;
        full["N"] = level;
        if (!full.contains("label") && j.contains("label"))
            full["label"] = j.at("label").get<std::string>() + "#" + std::to_string(out.size());
        DimensionTable t = ingest_table(full, allow_small_prime);
        const auto idx = static_cast<std::size_t>(t.descriptor().twist_index());
        if (seen[idx])
            fail(Errc::schema_violation, "duplicate twist_index " + std::to_string(t.descriptor().twist_index()));
        seen[idx] = true;
        out.push_back(std::move(t));
    }
    return out;
}

inline nlohmann::json serialize_family(const std::vector<DimensionTable>& family)
{
    if (family.empty()) fail(Errc::bad_argument, "empty family");
    nlohmann::json j;
    j["p"] = family.front().descriptor().p().value();
    j["N"] = family.front().descriptor().level();
    auto& jt = j["tables"] = nlohmann::json::array();
    for (const auto& t : family) {
        nlohmann::json one = serialize_table(t);
        one.erase("p");
        one.erase("N");
        jt.push_back(std::move(one));
    }
    return j;
}

// Extends a table to target_k by the exact affine continuation of its tail.
// The last fit_window rows must lie on a single affine function in k, for d
// and dp separately; any deviation means the table is still pre-stable and
// must be recomputed externally instead of extrapolated. Extension rows are
// flagged and every downstream report surfaces the first extrapolated weight.
inline DimensionTable extend_table(const DimensionTable& t, std::int64_t target_k, std::int64_t fit_window)
{
    if (fit_window < 3) fail(Errc::bad_argument, "fit_window must be >= 3");
    const auto& rows = t.rows();
    if (static_cast<std::int64_t>(rows.size()) < fit_window + 2)
        fail(Errc::table_too_short, "need at least fit_window + 2 = " + std::to_string(fit_window + 2) +
                                        " rows, have " + std::to_string(rows.size()));

    const std::size_t w0 = rows.size() - static_cast<std::size_t>(fit_window);
    struct Affine {
        Rational slope, intercept;
    };
    const auto fit = [&](auto value) -> Affine {
        const auto& first = rows[w0];
        const auto& last = rows.back();
        Rational slope(value(last) - value(first), last.k - first.k);
        Rational intercept = Rational(value(first)) - slope * first.k;
        for (std::size_t i = w0; i < rows.size(); ++i)
            if (slope * rows[i].k + intercept != Rational(value(rows[i])))
                fail(Errc::tail_not_affine, "last " + std::to_string(fit_window) +
                                                " rows do not lie on one affine function; supply the table "
                                                "to larger weights externally");
        return {slope, intercept};
    };
    const Affine fd = fit([](const DimensionRow& r) { return r.d; });
    const Affine fdp = fit([](const DimensionRow& r) { return r.dp; });

    std::vector<DimensionRow> out = rows;
    const std::int64_t step = t.descriptor().p().value() - 1;
    for (std::int64_t k = t.k_max() + step; k <= target_k; k += step) {
        const auto eval = [&](const Affine& f) {
            Rational v = f.slope * k + f.intercept;
            if (boost::multiprecision::denominator(v) != 1)
                fail(Errc::tail_not_affine, "affine continuation is non-integral at k = " + std::to_string(k));
            return static_cast<std::int64_t>(boost::multiprecision::numerator(v));
        };
        out.push_back({k, eval(fd), eval(fdp), true});
    }
    // DimensionTable's own validation enforces the row invariants on the
    // extrapolated rows; any violation aborts the extension.
    return DimensionTable(t.descriptor(), std::move(out));
}

} // namespace ghost
