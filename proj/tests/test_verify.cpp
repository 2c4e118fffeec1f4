#include <catch2/catch_amalgamated.hpp>

#include "ghost/verify.hpp"

using namespace ghost;

namespace {

const Prime p5(5, false);

DimensionTable table1()
{
    return DimensionTable(RhobarDescriptor("t1", p5, 3, 3, 0),
                          {{3, 0, 2}, {7, 1, 4}, {11, 2, 6}, {15, 2, 8}});
}

RhobarDescriptor desc1() { return RhobarDescriptor("t1", p5, 3, 3, 0); }

SlopeDataset tp_dataset(std::map<std::int64_t, std::vector<Rational>> entries)
{
    return SlopeDataset(desc1(), SlopeFlavor::tp_level_n, std::move(entries));
}

SlopeDataset up_dataset(std::map<std::int64_t, std::vector<Rational>> entries)
{
    return SlopeDataset(desc1(), SlopeFlavor::up_level_np, std::move(entries));
}

// the ghost's own predictions over the fixture weights, for reflexive tests
SlopeDataset reflexive_dataset(const GhostSeries& g, const DimensionTable& t,
                               const std::vector<std::int64_t>& weights)
{
    std::map<std::int64_t, std::vector<Rational>> entries;
    for (const std::int64_t k : weights) {
        const auto pts = evaluate_valuations_prefix(g, Weight::arithmetic(k), g.complete_prefix());
        entries[k] = first_slopes(lower_hull(pts), t.row(k).d);
    }
    return tp_dataset(std::move(entries));
}

LocalRep omega_omegachi()
{
    const FiniteField F = FiniteField::prime_field(p5);
    return LocalRep::split(F, F.from_int(1), F.from_int(-1), 0, 1);
}

} // namespace

TEST_CASE("slope dataset invariants", "[verify]")
{
    CHECK_THROWS_AS(tp_dataset({{7, {Rational(-1)}}}), Error);

    const SlopeDataset s = tp_dataset({{7, {Rational(3), Rational(1, 2)}}});
    CHECK(s.slopes_at(7) == std::vector<Rational>{Rational(1, 2), Rational(3)}); // sorted on entry

    try {
        s.slopes_at(11);
        FAIL("expected coverage-gap");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::coverage_gap);
    }

    // |entries[k]| must be d(k) for T_p data when a table is attached
    CHECK_THROWS_AS(s.validate_against(table1()), Error);
    CHECK_NOTHROW(tp_dataset({{7, {Rational(1)}}}).validate_against(table1()));
}

TEST_CASE("classical comparison", "[verify]")
{
    const DimensionTable t = table1();
    const GhostSeries g = build_ghost(t, 2);
    const std::vector<std::int64_t> weights{7, 11, 15};

    const SlopeDataset match = reflexive_dataset(g, t, weights);
    CHECK(match.slopes_at(7) == std::vector<Rational>{1});
    // at w_11 both coefficients have valuation 1, so the hull runs straight
    // to (2, 1)
    CHECK(match.slopes_at(11) == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});

    const Verdict ok = compare_classical(g, t, match, weights);
    CHECK(ok.status == Verdict::Status::consistent);
    CHECK(ok.exit_code() == 0);

    // perturbing any single slope in either direction flips the verdict
    for (const std::int64_t k : weights) {
        const auto& slopes = match.slopes_at(k);
        for (std::size_t i = 0; i < slopes.size(); ++i) {
            for (const Rational& delta : {Rational(1), Rational(-1, 2)}) {
                if (slopes[i] + delta < 0) continue;
                auto entries = match.entries();
                entries[k][i] += delta;
                const Verdict bad = compare_classical(g, t, tp_dataset(std::move(entries)), weights);
                REQUIRE(bad.status == Verdict::Status::falsified);
                REQUIRE(bad.witness_weight == k);
            }
        }
    }
}

TEST_CASE("classical comparison error paths", "[verify]")
{
    const DimensionTable t = table1();
    const GhostSeries g = build_ghost(t, 2);
    const std::vector<std::int64_t> weights{7};

    try {
        compare_classical(g, t, up_dataset({{7, {Rational(1)}}}), weights);
        FAIL("expected flavor-mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::flavor_mismatch);
    }
    try {
        compare_classical(g, t, tp_dataset({{11, {Rational(1), Rational(1)}}}), weights);
        FAIL("expected coverage-gap");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::coverage_gap);
    }
    const std::vector<std::int64_t> outside{19};
    try {
        compare_classical(g, t, tp_dataset({{19, {Rational(1)}}}), outside);
        FAIL("expected coverage-gap");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::coverage_gap);
    }

    // d(15) = 2 but only one complete coefficient available
    const GhostSeries g1 = build_ghost(t, 1);
    try {
        compare_classical(g1, t, tp_dataset({{15, {Rational(1), Rational(1)}}}), std::vector<std::int64_t>{15});
        FAIL("expected incomplete-coefficient");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::incomplete_coefficient);
    }
}

TEST_CASE("classicality cross-check at weight 7", "[verify]")
{
    const DimensionTable t = table1();
    const GhostSeries g = build_ghost(t, 2);

    // the fixture contradiction: ghost slope 1 <= 1 but classical U_5 slopes
    // at weight 7 are all at least 5/2
    const SlopeDataset u5 =
        up_dataset({{7, {Rational(5, 2), Rational(5, 2), Rational(3), Rational(3)}}});
    const Verdict bad = coleman_consistency(g, t, u5, 7);
    CHECK(bad.status == Verdict::Status::falsified);
    CHECK(bad.witness_weight == 7);
    CHECK(bad.witness_ghost_slope == Rational(1));
    CHECK(bad.evidence.front().find("5/2") != std::string::npos);

    // a dataset whose sub-cutoff slopes contain the ghost's is consistent
    const SlopeDataset fine = up_dataset({{7, {Rational(1), Rational(5), Rational(11, 2), Rational(6)}}});
    CHECK(coleman_consistency(g, t, fine, 7).status == Verdict::Status::consistent);

    CHECK_THROWS_AS(coleman_consistency(g, t, tp_dataset({{7, {Rational(1)}}}), 7), Error);
}

TEST_CASE("classicality boundary at weight 3", "[verify]")
{
    // ghost with no zeros in g_1: slope 0 at w_3, below the cutoff k-1 = 2,
    // while the classical slopes all sit at or above it
    const DimensionTable t(RhobarDescriptor("ord3", p5, 3, 3, 0), {{3, 1, 2}, {7, 1, 4}});
    const GhostSeries g = build_ghost(t, 1);
    const SlopeDataset s = up_dataset({{3, {Rational(2), Rational(3)}}});
    const Verdict v = coleman_consistency(g, t, s, 3);
    CHECK(v.status == Verdict::Status::falsified);
    CHECK(v.witness_ghost_slope == Rational(0));
}

TEST_CASE("classicality equality once the polygon resolves all U_p steps", "[verify]")
{
    // g_1 has no zeros and g_2 vanishes only at w_22, so at w_2 the polygon
    // is (0,0), (1,0), (2,2): slopes {0, 2}, horizontal length 2 = d_p(2)
    const DimensionTable t(RhobarDescriptor("eq", p5, 3, 2, 0),
                           {{2, 1, 2}, {6, 1, 2}, {10, 1, 2}, {14, 1, 2}, {18, 1, 3}, {22, 1, 4}, {26, 2, 4}});
    const GhostSeries g = build_ghost(t, 2);
    REQUIRE(g.coefficient(1).zeros.empty());
    REQUIRE(g.coefficient(2).zeros == std::vector<GhostZero>{{22, 1}});

    const auto up2 = [&](std::vector<Rational> slopes) {
        return SlopeDataset(t.descriptor(), SlopeFlavor::up_level_np, {{2, std::move(slopes)}});
    };

    // ghost slopes below the cutoff 1 are exactly {0}; a second classical
    // slope below the cutoff is unmatched and falsifies
    const Verdict bad = coleman_consistency(g, t, up2({Rational(0), Rational(1, 2)}), 2);
    CHECK(bad.status == Verdict::Status::falsified);
    CHECK(bad.witness_classical_slope == Rational(1, 2));

    // with the rest of the classical slopes at or above the cutoff the
    // multisets agree below it
    CHECK(coleman_consistency(g, t, up2({Rational(0), Rational(3)}), 2).status ==
          Verdict::Status::consistent);
}

TEST_CASE("low-weight regularity criterion", "[verify]")
{
    const auto entries_ordinary = [] {
        std::map<std::int64_t, std::vector<Rational>> e;
        for (std::int64_t k = 2; k <= 7; ++k) e[k] = {Rational(0)};
        return e;
    };

    CHECK(regularity_from_slopes(tp_dataset(entries_ordinary()), p5).status ==
          Verdict::Status::consistent);

    auto with_slope1 = entries_ordinary();
    with_slope1[7] = {Rational(0), Rational(1), Rational(1)};
    CHECK(regularity_from_slopes(tp_dataset(with_slope1), p5).status == Verdict::Status::consistent);

    auto supersingular = entries_ordinary();
    supersingular[7] = {Rational(3, 2), Rational(2)};
    const Verdict v = regularity_from_slopes(tp_dataset(supersingular), p5);
    CHECK(v.status == Verdict::Status::falsified);
    CHECK(v.headline == "irregular");
    CHECK(v.witness_weight == 7);

    auto low_nonordinary = entries_ordinary();
    low_nonordinary[4] = {Rational(1, 2)};
    const Verdict v2 = regularity_from_slopes(tp_dataset(low_nonordinary), p5);
    CHECK(v2.status == Verdict::Status::falsified);
    CHECK(v2.witness_weight == 4);

    auto gappy = entries_ordinary();
    gappy.erase(5);
    try {
        regularity_from_slopes(tp_dataset(gappy), p5);
        FAIL("expected coverage-gap");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::coverage_gap);
    }
}

TEST_CASE("falsification detectors on the fixture configuration", "[verify]")
{
    const DimensionTable t = table1();
    const GhostSeries g = build_ghost(t, 2);
    const SlopeDataset u5 =
        up_dataset({{7, {Rational(5, 2), Rational(5, 2), Rational(3), Rational(3)}}});

    const Verdict v = prop33_falsifier(g, t, omega_omegachi(), u5);
    REQUIRE(v.status == Verdict::Status::falsified);
    CHECK(v.exit_code() == 2);
    CHECK(v.witness_weight == 7);
    CHECK(v.witness_ghost_slope == Rational(1));
    CHECK(v.witness_classical_slope == Rational(5, 2));
    bool found = false;
    for (const auto& line : v.evidence)
        if (line.find("ghost least slope") != std::string::npos &&
            line.find("at w_7") != std::string::npos && line.find("5/2") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("falsification detector gates", "[verify]")
{
    const DimensionTable t = table1();
    const GhostSeries g = build_ghost(t, 2);
    const FiniteField F = FiniteField::prime_field(p5);

    // regular representation: not applicable, exit 3
    const LocalRep one_plus_omega = LocalRep::split(F, F.from_int(1), F.from_int(1), 1, 1);
    const Verdict na = prop33_falsifier(g, t, one_plus_omega, up_dataset({{7, {Rational(1)}}}));
    CHECK(na.status == Verdict::Status::inconclusive);
    CHECK(na.headline == "not applicable");
    CHECK(na.exit_code() == 3);

    // twist mismatch between an irregular rep and the table component
    const LocalRep irregular_b5 = LocalRep::split(F, F.from_int(1), F.from_int(-1), 0, 0);
    CHECK(b_of(irregular_b5) == 5);
    CHECK_THROWS_AS(prop33_falsifier(g, t, irregular_b5, up_dataset({{7, {Rational(1)}}})), Error);

    // irregular but all-ordinary data in weight b: detector (i) does not fire
    const DimensionTable tb(RhobarDescriptor("b3", p5, 3, 3, 0), {{3, 1, 2}});
    const GhostSeries gb = build_ghost(tb, 1);
    const Verdict quiet =
        prop33_falsifier(gb, tb, omega_omegachi(), tp_dataset({{3, {Rational(0)}}}));
    CHECK(quiet.status == Verdict::Status::inconclusive);
    CHECK(quiet.headline == "inconclusive");

    // and a nonzero slope in weight b fires detector (i)
    const Verdict fired =
        prop33_falsifier(gb, tb, omega_omegachi(), tp_dataset({{3, {Rational(1)}}}));
    CHECK(fired.status == Verdict::Status::falsified);
    CHECK(fired.witness_weight == 3);
    CHECK(fired.witness_classical_slope == Rational(1));

    // missing required weight
    const SlopeDataset empty_ds = up_dataset({});
    try {
        prop33_falsifier(g, t, omega_omegachi(), empty_ds);
        FAIL("expected coverage-gap");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::coverage_gap);
    }
}

TEST_CASE("multiplicity-stability check", "[verify]")
{
    const SlopeDataset clay = tp_dataset({{7, {Rational(1), Rational(1)}},
                                          {27, {Rational(1), Rational(1), Rational(1), Rational(1)}}});

    // applicable: 7, 27 >= 4 and 27 - 7 = 20 = 0 mod (5-1)5^1
    const Verdict v = gouvea_mazur_check(clay, 7, 27, Rational(1), p5);
    CHECK(v.status == Verdict::Status::falsified);
    CHECK(v.headline == "GM violated");
    CHECK(v.evidence.front().find("multiplicity 2") != std::string::npos);
    CHECK(v.evidence.front().find("multiplicity 4") != std::string::npos);

    // h = 3 fails the weight bound 2h+2 = 8 > 7
    const Verdict na = gouvea_mazur_check(clay, 7, 27, Rational(3), p5);
    CHECK(na.status == Verdict::Status::inconclusive);
    CHECK(na.headline == "inapplicable");
    CHECK(na.exit_code() == 3);

    // congruence failure: 11 - 7 = 4 != 0 mod 20
    const SlopeDataset other = tp_dataset({{7, {Rational(1)}}, {11, {Rational(1)}}});
    CHECK(gouvea_mazur_check(other, 7, 11, Rational(1), p5).status == Verdict::Status::inconclusive);

    // identical multiplicities agree
    const SlopeDataset same = tp_dataset({{7, {Rational(1), Rational(2)}}, {27, {Rational(1), Rational(3)}}});
    CHECK(gouvea_mazur_check(same, 7, 27, Rational(1), p5).status == Verdict::Status::consistent);

    CHECK_THROWS_AS(gouvea_mazur_check(clay, 7, 47, Rational(1), p5), Error); // missing weight 47
    CHECK_THROWS_AS(gouvea_mazur_check(clay, 7, 27, Rational(-1), p5), Error);
}

TEST_CASE("low-weight criterion agrees with the local classifier on the paired fixtures", "[verify]")
{
    const FiniteField F = FiniteField::prime_field(p5);
    const auto entries_ordinary = [] {
        std::map<std::int64_t, std::vector<Rational>> e;
        for (std::int64_t k = 2; k <= 7; ++k) e[k] = {Rational(0)};
        return e;
    };

    // omega + omega*chi is irregular; its low-weight data shape has the
    // nonempty weight-7 space entirely above slope 1
    auto supersingular = entries_ordinary();
    supersingular[7] = {Rational(5, 2), Rational(5, 2)};
    CHECK(is_irregular(LocalRep::split(F, F.from_int(1), F.from_int(-1), 0, 1)).irregular);
    CHECK(regularity_from_slopes(tp_dataset(supersingular), p5).status == Verdict::Status::falsified);

    // 1 + omega is regular; its aggregated low-weight data is ordinary
    CHECK_FALSE(is_irregular(LocalRep::split(F, F.from_int(1), F.from_int(1), 1, 0)).irregular);
    CHECK(regularity_from_slopes(tp_dataset(entries_ordinary()), p5).status ==
          Verdict::Status::consistent);
}

TEST_CASE("the falsifier never fires on regular representations", "[verify]")
{
    const DimensionTable t = table1();
    const GhostSeries g = build_ghost(t, 2);
    const SlopeDataset u5 =
        up_dataset({{7, {Rational(5, 2), Rational(5, 2), Rational(3), Rational(3)}}});
    const FiniteField F = FiniteField::prime_field(p5);

    for (std::int64_t ai = 1; ai < 5; ++ai)
        for (std::int64_t bi = 1; bi < 5; ++bi)
            for (std::int64_t tt = 0; tt < 4; ++tt)
                for (std::int64_t j = 0; j < 4; ++j) {
                    const LocalRep r =
                        LocalRep::split(F, F.from_int(ai), F.from_int(bi), tt, j);
                    if (is_irregular(r).irregular) continue;
                    const Verdict v = prop33_falsifier(g, t, r, u5);
                    CHECK(v.status == Verdict::Status::inconclusive);
                    CHECK(v.headline == "not applicable");
                }
}

TEST_CASE("p = 3 verdicts carry the conjecture-range stamp", "[verify]")
{
    const Prime p3(3, true);
    const DimensionTable t(RhobarDescriptor("p3", p3, 5, 2, 0), {{2, 0, 2}, {4, 1, 4}, {6, 2, 6}});
    const GhostSeries g = build_ghost(t, 2);
    const SlopeDataset s(RhobarDescriptor("p3", p3, 5, 2, 0), SlopeFlavor::tp_level_n,
                         {{4, {Rational(1)}}});
    const Verdict v = compare_classical(g, t, s, std::vector<std::int64_t>{4});
    CHECK(v.status == Verdict::Status::consistent);
    bool stamped = false;
    for (const auto& line : v.evidence)
        if (line.find("outside the conjecture's stated range") != std::string::npos) stamped = true;
    CHECK(stamped);
}

TEST_CASE("verdicts are deterministic and carry provenance stamps", "[verify]")
{
    const DimensionTable t = table1();
    const GhostSeries g = build_ghost(t, 2);
    const std::vector<std::int64_t> weights{7, 11};
    const SlopeDataset s = reflexive_dataset(g, t, weights);

    const Verdict a = compare_classical(g, t, s, weights);
    const Verdict b = compare_classical(g, t, s, weights);
    CHECK(a.status == b.status);
    CHECK(a.headline == b.headline);
    CHECK(a.evidence == b.evidence);

    // extrapolated tables are surfaced in the evidence
    const DimensionTable longer(
        t.descriptor(), {{3, 0, 2}, {7, 1, 4}, {11, 2, 6}, {15, 2, 8}, {19, 2, 10}, {23, 2, 12}});
    const DimensionTable ext = extend_table(longer, 31, 4);
    const GhostSeries gext = build_ghost(ext, 2);
    const Verdict stamped = compare_classical(gext, ext, reflexive_dataset(gext, ext, weights), weights);
    bool noted = false;
    for (const auto& line : stamped.evidence)
        if (line.find("extrapolated from k = 27") != std::string::npos) noted = true;
    CHECK(noted);

    // JSON projection carries the witness
    const SlopeDataset u5 =
        up_dataset({{7, {Rational(5, 2), Rational(5, 2), Rational(3), Rational(3)}}});
    const nlohmann::json j = prop33_falsifier(g, t, omega_omegachi(), u5).to_json();
    CHECK(j["status"] == "falsified");
    CHECK(j["weight"] == 7);
    CHECK(j["classical_slope"] == "5/2");
}
