#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "ghost/dimension_table.hpp"
#include "ghost/errors.hpp"
#include "ghost/rational.hpp"

namespace ghost {

// T_p slopes live on the level-N spaces (d(k) of them per weight); U_p slopes
// on the level-Np spaces (d_p(k) of them). The two are compared against the
// ghost series in different ways and never against each other.
enum class SlopeFlavor { tp_level_n, up_level_np };

inline const char* flavor_name(SlopeFlavor f)
{
    return f == SlopeFlavor::tp_level_n ? "Tp-level-N" : "Up-level-Np";
}

// Externally computed classical slope data: weight -> sorted multiset of
// exact rational slopes. The harness never computes eigenforms; provenance
// belongs in the descriptor notes.
class SlopeDataset {
public:
    SlopeDataset(RhobarDescriptor descriptor, SlopeFlavor flavor,
                 std::map<std::int64_t, std::vector<Rational>> entries)
        : desc_(std::move(descriptor)), flavor_(flavor), entries_(std::move(entries))
    {
        for (auto& [k, slopes] : entries_) {
            if (k < 2) fail(Errc::schema_violation, "slope entry at weight " + std::to_string(k) + " < 2");
            for (const auto& s : slopes)
                if (s < 0)
                    fail(Errc::dataset_invariant,
                         "negative slope " + to_string(s) + " at weight " + std::to_string(k));
            std::sort(slopes.begin(), slopes.end());
        }
    }

    const RhobarDescriptor& descriptor() const { return desc_; }
    SlopeFlavor flavor() const { return flavor_; }
    const std::map<std::int64_t, std::vector<Rational>>& entries() const { return entries_; }

    bool has_weight(std::int64_t k) const { return entries_.count(k) != 0; }

    const std::vector<Rational>& slopes_at(std::int64_t k) const
    {
        auto it = entries_.find(k);
        if (it == entries_.end())
            fail(Errc::coverage_gap, "dataset has no entry for weight " + std::to_string(k));
        return it->second;
    }

    // Entry sizes must match the table's dimensions wherever both sides have
    // the weight: d(k) for T_p data, d_p(k) for U_p data.
    void validate_against(const DimensionTable& t) const
    {
        for (const auto& [k, slopes] : entries_) {
            if (!t.has_row(k)) continue;
            const auto& r = t.row(k);
            const std::int64_t expected = flavor_ == SlopeFlavor::tp_level_n ? r.d : r.dp;
            if (static_cast<std::int64_t>(slopes.size()) != expected)
                fail(Errc::dataset_invariant,
                     "weight " + std::to_string(k) + " has " + std::to_string(slopes.size()) +
                         " slopes, table expects " + std::to_string(expected) + " for " +
                         flavor_name(flavor_));
        }
    }

    bool operator==(const SlopeDataset& o) const
    {
        return desc_ == o.desc_ && flavor_ == o.flavor_ && entries_ == o.entries_;
    }

private:
    RhobarDescriptor desc_;
    SlopeFlavor flavor_;
    std::map<std::int64_t, std::vector<Rational>> entries_;
};

inline SlopeDataset ingest_slopes(const nlohmann::json& j, bool allow_small_prime = false)
{
    detail::require_keys(j, {"flavor", "entries"}, "slope dataset");
    RhobarDescriptor desc = detail::descriptor_from_json(j, allow_small_prime);
    const std::string flavor_text = j.at("flavor").get<std::string>();
    SlopeFlavor flavor;
    if (flavor_text == "Tp-level-N")
        flavor = SlopeFlavor::tp_level_n;
    else if (flavor_text == "Up-level-Np")
        flavor = SlopeFlavor::up_level_np;
    else
        fail(Errc::schema_violation, "flavor must be \"Tp-level-N\" or \"Up-level-Np\"");

    if (!j.at("entries").is_object()) fail(Errc::schema_violation, "\"entries\" must map weights to slope arrays");
    std::map<std::int64_t, std::vector<Rational>> entries;
    for (const auto& [key, jslopes] : j.at("entries").items()) {
        std::int64_t k = 0;
        try {
            std::size_t pos = 0;
            k = std::stoll(key, &pos);
            if (pos != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            fail(Errc::schema_violation, "entry key '" + key + "' is not a weight");
        }
        if (!jslopes.is_array()) fail(Errc::schema_violation, "slopes at weight " + key + " must be an array");
        std::vector<Rational> slopes;
        for (const auto& js : jslopes) {
            if (js.is_number_integer())
                slopes.emplace_back(js.get<std::int64_t>());
            else if (js.is_string())
                slopes.push_back(parse_rational(js.get<std::string>()));
            else
                fail(Errc::schema_violation,
                     "slopes must be exact rational strings like \"5/2\" (no decimals), at weight " + key);
        }
        entries.emplace(k, std::move(slopes));
    }
    return SlopeDataset(std::move(desc), flavor, std::move(entries));
}

inline SlopeDataset ingest_slopes(const std::string& json_text, bool allow_small_prime = false)
{
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) fail(Errc::schema_violation, "slope file is not valid JSON");
    return ingest_slopes(j, allow_small_prime);
}

inline nlohmann::json serialize_slopes(const SlopeDataset& s)
{
    nlohmann::json j = detail::descriptor_to_json(s.descriptor());
    j["flavor"] = flavor_name(s.flavor());
    auto& je = j["entries"] = nlohmann::json::object();
    for (const auto& [k, slopes] : s.entries()) {
        auto& arr = je[std::to_string(k)] = nlohmann::json::array();
        for (const auto& slope : slopes) arr.push_back(to_string(slope));
    }
    return j;
}

} // namespace ghost
