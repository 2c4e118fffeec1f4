// Command-line front end: builds ghost series from dimension tables, computes
// Newton polygons and slope predictions at p-adic weights, classifies local
// mod-p representations, and runs the verification/falsification checks
// against external classical slope data.
//
// Exit codes: 0 = consistent/regular, 2 = falsified/irregular,
// 3 = inconclusive/inapplicable, 1 = usage or data errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ghost/ghost.hpp"

namespace {

using namespace ghost;

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in.good()) fail(Errc::bad_argument, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_out(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out.good()) fail(Errc::bad_argument, "cannot write " + path);
    out << text;
}

struct CommonOpts {
    bool allow_small_prime = false;
    bool json = false;
    std::string out_path;
};

struct TableOpts {
    std::optional<std::int64_t> twist;     // select from a family file
    std::optional<std::int64_t> extend_to; // affine tail extension target
    std::int64_t fit_window = 4;
};

void add_table_opts(CLI::App* cmd, TableOpts& topt)
{
    cmd->add_option("--twist", topt.twist, "twist index to select from a family file");
    cmd->add_option("--extend-to", topt.extend_to,
                    "extend the table to this weight by its exact affine tail before use");
    cmd->add_option("--fit-window", topt.fit_window,
                    "tail rows the affine extension must reproduce exactly (default 4)");
}

void add_common(CLI::App* cmd, CommonOpts& opts)
{
    cmd->add_flag("--allow-small-prime", opts.allow_small_prime,
                  "admit p = 3 (reports are stamped; p = 2 is always refused)");
    cmd->add_flag("--json", opts.json, "emit a structured JSON report instead of text");
    cmd->add_option("--out", opts.out_path, "write the report to a file instead of stdout");
}

DimensionTable load_table(const std::string& path, bool allow_small_prime, const TableOpts& topt)
{
    nlohmann::json j = nlohmann::json::parse(slurp(path), nullptr, false);
    if (j.is_discarded()) fail(Errc::schema_violation, path + " is not valid JSON");
    const auto pick = [&]() -> DimensionTable {
        if (j.contains("tables")) {
            const auto family = ingest_family(j, allow_small_prime);
            if (!topt.twist)
                fail(Errc::bad_argument, path + " is a family file; pick a table with --twist");
            for (const auto& t : family)
                if (t.descriptor().twist_index() == *topt.twist) return t;
            fail(Errc::bad_argument, "family has no table with twist_index " + std::to_string(*topt.twist));
        }
        return ingest_table(j, allow_small_prime);
    };
    DimensionTable t = pick();
    if (topt.extend_to) return extend_table(t, *topt.extend_to, topt.fit_window);
    return t;
}

// all coefficients the table can complete, the default scope everywhere
std::int64_t auto_coefficients(const DimensionTable& t, std::int64_t requested)
{
    if (requested > 0) return requested;
    return std::max<std::int64_t>(t.rows().back().d, 1);
}

std::vector<std::string> provenance_notes(const GhostSeries& g)
{
    std::vector<std::string> notes;
    if (auto from = g.first_extrapolated_k())
        notes.push_back("note: dimension table extrapolated from k = " + std::to_string(*from));
    if (g.descriptor().p().outside_conjecture_range())
        notes.push_back("note: p = " + std::to_string(g.descriptor().p().value()) +
                        " is outside the conjecture's stated range");
    return notes;
}

int emit_verdict(const Verdict& v, const CommonOpts& opts)
{
    std::ostringstream os;
    if (opts.json) {
        os << v.to_json().dump(2) << "\n";
    } else {
        os << v.headline << "\n";
        for (const auto& line : v.evidence) os << "  " << line << "\n";
    }
    write_out(opts.out_path, os.str());
    return v.exit_code();
}

int run_build_ghost(const std::string& table_path, std::int64_t n, bool require_complete,
                    const TableOpts& topt, const CommonOpts& opts)
{
    const DimensionTable t = load_table(table_path, opts.allow_small_prime, topt);
    const GhostSeries g = build_ghost(t, auto_coefficients(t, n), require_complete);
    std::ostringstream os;
    if (opts.json) {
        os << serialize_series(g).dump(2) << "\n";
    } else {
        os << "ghost series for " << g.descriptor().label() << " (p = " << g.descriptor().p().value()
           << ", N = " << g.descriptor().level() << ", b = " << g.descriptor().b() << ")\n";
        for (const auto& c : g.coefficients()) {
            os << "  g_" << c.index << " :";
            if (c.zeros.empty()) os << " 1";
            for (const auto& z : c.zeros) {
                os << " (w - w_" << z.k << ")";
                if (z.multiplicity > 1) os << "^" << z.multiplicity;
            }
            os << (c.complete ? "" : "  [incomplete]") << "\n";
        }
        for (const auto& note : provenance_notes(g)) os << note << "\n";
    }
    write_out(opts.out_path, os.str());
    return 0;
}

GhostSeries load_series(const std::string& ghost_path, const std::string& table_path, std::int64_t n,
                        const TableOpts& topt, const CommonOpts& opts)
{
    if (!ghost_path.empty()) return parse_series(slurp(ghost_path), opts.allow_small_prime);
    if (table_path.empty()) fail(Errc::bad_argument, "need --table or --ghost");
    const DimensionTable t = load_table(table_path, opts.allow_small_prime, topt);
    return build_ghost(t, auto_coefficients(t, n));
}

int run_newton(const std::string& table_path, const std::string& ghost_path, std::int64_t n,
               const TableOpts& topt, std::optional<std::int64_t> weight_k,
               const std::string& generic_c, const std::string& format, bool allow_off_component,
               const CommonOpts& opts)
{
    const GhostSeries g = load_series(ghost_path, table_path, n, topt, opts);
    if (weight_k.has_value() == !generic_c.empty())
        fail(Errc::bad_argument, "pick exactly one of --weight and --generic");
    const Weight w = weight_k ? Weight::arithmetic(*weight_k)
                              : Weight::generic(parse_rational(generic_c));

    const std::int64_t prefix = g.complete_prefix();
    const auto pts = evaluate_valuations_prefix(g, w, prefix, {.allow_off_component = allow_off_component});
    const NewtonPolygon np = lower_hull(pts);

    std::ostringstream os;
    if (format == "points") {
        write_polygon_points(os, pts);
    } else if (format == "json" || opts.json) {
        nlohmann::json j = polygon_to_json(np);
        j["weight"] = w.str();
        j["coefficients_used"] = prefix;
        if (prefix < g.size()) j["dropped_incomplete"] = g.size() - prefix;
        nlohmann::json notes = nlohmann::json::array();
        for (const auto& note : provenance_notes(g)) notes.push_back(note);
        if (!notes.empty()) j["notes"] = notes;
        os << j.dump(2) << "\n";
    } else {
        os << "Newton polygon of the ghost series at " << w.str() << " (coefficients 0.." << prefix
           << ")\n";
        if (prefix < g.size())
            os << "note: dropped " << (g.size() - prefix) << " incomplete trailing coefficient(s)\n";
        write_polygon_table(os, np);
        for (const auto& note : provenance_notes(g)) os << note << "\n";
    }
    write_out(opts.out_path, os.str());
    return 0;
}

int run_predict(const std::string& table_path, std::int64_t n, const TableOpts& topt,
                const std::vector<std::int64_t>& weights, const CommonOpts& opts)
{
    const DimensionTable t = load_table(table_path, opts.allow_small_prime, topt);
    const GhostSeries g = build_ghost(t, auto_coefficients(t, n));
    std::ostringstream os;
    nlohmann::json jout;
    jout["predictions"] = nlohmann::json::object();
    for (const std::int64_t k : weights) {
        if (!t.has_row(k)) fail(Errc::coverage_gap, "table does not cover weight " + std::to_string(k));
        const std::int64_t d = t.row(k).d;
        if (g.complete_prefix() < d)
            fail(Errc::incomplete_coefficient,
                 "only " + std::to_string(g.complete_prefix()) + " complete coefficients, need d(" +
                     std::to_string(k) + ") = " + std::to_string(d));
        const auto pts = evaluate_valuations_prefix(g, Weight::arithmetic(k), g.complete_prefix());
        const auto slopes = first_slopes(lower_hull(pts), d);
        if (opts.json) {
            auto& arr = jout["predictions"][std::to_string(k)] = nlohmann::json::array();
            for (const auto& s : slopes) arr.push_back(to_string(s));
        } else {
            os << "k = " << k << ": ";
            if (slopes.empty()) os << "(no classical forms predicted)";
            for (const auto& s : slopes) os << to_string(s) << " ";
            os << "\n";
        }
    }
    if (opts.json) {
        nlohmann::json notes = nlohmann::json::array();
        for (const auto& note : provenance_notes(g)) notes.push_back(note);
        if (!notes.empty()) jout["notes"] = notes;
        os << jout.dump(2) << "\n";
    } else {
        for (const auto& note : provenance_notes(g)) os << note << "\n";
    }
    write_out(opts.out_path, os.str());
    return 0;
}

int run_compare(const std::string& table_path, const std::string& slopes_path, std::int64_t n,
                const TableOpts& topt, const std::vector<std::int64_t>& weights,
                const CommonOpts& opts)
{
    const DimensionTable t = load_table(table_path, opts.allow_small_prime, topt);
    const GhostSeries g = build_ghost(t, auto_coefficients(t, n));
    const SlopeDataset s = ingest_slopes(slurp(slopes_path), opts.allow_small_prime);
    std::vector<std::int64_t> ks = weights;
    if (ks.empty())
        for (const auto& [k, unused] : s.entries()) ks.push_back(k);
    return emit_verdict(compare_classical(g, t, s, ks), opts);
}

int run_classify(const std::string& rep_text, std::optional<std::int64_t> crystalline_weight,
                 const std::string& slope_text, const std::string& trace_text,
                 std::optional<std::int64_t> crystalline_p, const CommonOpts& opts)
{
    std::ostringstream os;
    bool irregular = false;
    nlohmann::json j;
    if (!rep_text.empty()) {
        const LocalRep r = parse_local_rep(rep_text, opts.allow_small_prime);
        const Classification cls = is_irregular(r);
        irregular = cls.irregular;
        j["rep"] = r.str();
        j["b"] = b_of(r);
        j["verdict"] = cls.irregular ? "irregular" : "regular";
        j["witness"] = cls.witness;
        os << (cls.irregular ? "irregular" : "regular") << "\n  " << r.str() << "\n  witness: "
           << cls.witness << "\n  component b = " << b_of(r) << "\n";
    } else if (crystalline_weight) {
        if (!crystalline_p) fail(Errc::bad_argument, "--crystalline-weight needs --p");
        const Prime p(*crystalline_p, opts.allow_small_prime);
        const FiniteField F = FiniteField::prime_field(p);
        std::optional<FqElement> trace;
        if (!trace_text.empty()) trace = F.parse(trace_text);
        const ReductionShape shape =
            reduce_crystalline_small_weight(F, *crystalline_weight, parse_rational(slope_text), trace);
        irregular = shape.classification.irregular;
        j["shape"] = shape.str(F);
        j["slope_condition"] = shape.slope_condition;
        j["verdict"] = irregular ? "irregular" : "regular";
        j["witness"] = shape.classification.witness;
        os << (irregular ? "irregular" : "regular") << "\n  reduction: " << shape.str(F)
           << "\n  case: " << shape.slope_condition << "\n  witness: " << shape.classification.witness
           << "\n";
    } else {
        fail(Errc::bad_argument, "pass --rep or --crystalline-weight");
    }
    write_out(opts.out_path, opts.json ? j.dump(2) + "\n" : os.str());
    return irregular ? 2 : 0;
}

int run_check_regular(const std::string& slopes_path, const CommonOpts& opts)
{
    const SlopeDataset s = ingest_slopes(slurp(slopes_path), opts.allow_small_prime);
    return emit_verdict(regularity_from_slopes(s, s.descriptor().p()), opts);
}

int run_check_gm(const std::string& slopes_path, std::int64_t k, std::int64_t k2,
                 const std::string& h_text, const CommonOpts& opts)
{
    const SlopeDataset s = ingest_slopes(slurp(slopes_path), opts.allow_small_prime);
    return emit_verdict(gouvea_mazur_check(s, k, k2, parse_rational(h_text), s.descriptor().p()), opts);
}

int run_falsify(const std::string& table_path, const std::string& slopes_path,
                const std::string& rep_text, std::int64_t n, const TableOpts& topt,
                const CommonOpts& opts)
{
    const DimensionTable t = load_table(table_path, opts.allow_small_prime, topt);
    const GhostSeries g = build_ghost(t, auto_coefficients(t, n));
    const SlopeDataset s = ingest_slopes(slurp(slopes_path), opts.allow_small_prime);
    const LocalRep r = parse_local_rep(rep_text, opts.allow_small_prime);
    return emit_verdict(prop33_falsifier(g, t, r, s), opts);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ghost series toolkit: exact slope predictions for p-adic families of modular "
                 "forms, and their verification against classical data"};
    app.require_subcommand(1);

    // shared option state per subcommand
    struct {
        CommonOpts common;
        std::string table, ghost_file, slopes, rep, generic, format = "human", slope, trace, h;
        std::int64_t n = 0, k = 0, k2 = 0;
        TableOpts topt;
        std::optional<std::int64_t> weight, crystalline_weight, p;
        std::vector<std::int64_t> weights;
        bool require_complete = false, allow_off_component = false;
    } o;

    auto* build = app.add_subcommand("build-ghost", "construct ghost coefficients from a dimension table");
    build->add_option("--table", o.table, "dimension table (or family) JSON file")->required();
    build->add_option("-n,--coefficients", o.n, "how many coefficients (default: all completable)");
    build->add_flag("--require-complete", o.require_complete, "error unless every coefficient is complete");
    add_table_opts(build, o.topt);
    add_common(build, o.common);

    auto* newton = app.add_subcommand("newton", "Newton polygon of the ghost series at one weight");
    newton->add_option("--table", o.table, "dimension table JSON file");
    newton->add_option("--ghost", o.ghost_file, "previously serialized ghost series JSON file");
    newton->add_option("-n,--coefficients", o.n, "coefficients to build from --table");
    add_table_opts(newton, o.topt);
    newton->add_option("--weight", o.weight, "arithmetic weight k >= 2");
    newton->add_option("--generic", o.generic, "v_p(w) of a generic weight, as an exact rational");
    newton->add_option("--format", o.format, "human | json | points")
        ->check(CLI::IsMember({"human", "json", "points"}));
    newton->add_flag("--allow-off-component", o.allow_off_component,
                     "evaluate at arithmetic weights off the k = b (mod p-1) component");
    add_common(newton, o.common);

    auto* predict = app.add_subcommand("predict", "ghost slope predictions at classical weights");
    predict->add_option("--table", o.table, "dimension table JSON file")->required();
    predict->add_option("--weights", o.weights, "weights to predict at")->required()->delimiter(',');
    predict->add_option("-n,--coefficients", o.n, "coefficients (default: all completable)");
    add_table_opts(predict, o.topt);
    add_common(predict, o.common);

    auto* compare = app.add_subcommand("compare", "compare ghost predictions with classical T_p slopes");
    compare->add_option("--table", o.table, "dimension table JSON file")->required();
    compare->add_option("--slopes", o.slopes, "T_p slope dataset JSON file")->required();
    compare->add_option("--weights", o.weights, "weights to compare (default: all dataset weights)")
        ->delimiter(',');
    compare->add_option("-n,--coefficients", o.n, "coefficients (default: all completable)");
    add_table_opts(compare, o.topt);
    add_common(compare, o.common);

    auto* classify = app.add_subcommand("classify", "regular/irregular classification");
    classify->add_option("--rep", o.rep, "rep descriptor, e.g. 'split p=5 m=1 modulus=0,1 "
                                         "alpha=1 beta=4 t=0 j=1' or 'ind p=5 s=1 j=0'");
    classify->add_option("--crystalline-weight", o.crystalline_weight,
                         "weight k in [2, p+2] for the small-weight crystalline reduction");
    classify->add_option("--p", o.p, "prime for --crystalline-weight");
    classify->add_option("--slope", o.slope, "v_p(a_p) > 0 as an exact rational");
    classify->add_option("--trace", o.trace, "a_p/p in the residue field (slope-1 case), e.g. '2'");
    add_common(classify, o.common);

    auto* check_regular =
        app.add_subcommand("check-regular", "decide regularity from twist-aggregated low-weight slopes");
    check_regular->add_option("--slopes", o.slopes, "T_p dataset covering weights 2..p+2")->required();
    add_common(check_regular, o.common);

    auto* check_gm = app.add_subcommand("check-gm", "multiplicity-stability check between two weights");
    check_gm->add_option("--slopes", o.slopes, "slope dataset JSON file")->required();
    check_gm->add_option("-k,--weight", o.k, "first weight")->required();
    check_gm->add_option("--k2", o.k2, "second weight")->required();
    check_gm->add_option("--slope-h", o.h, "the slope h whose multiplicity is compared")->required();
    add_common(check_gm, o.common);

    auto* falsify = app.add_subcommand("falsify", "run the irregular-case falsification detectors");
    falsify->add_option("--table", o.table, "dimension table JSON file")->required();
    falsify->add_option("--slopes", o.slopes, "slope dataset JSON file")->required();
    falsify->add_option("--rep", o.rep, "rep descriptor for the same twist as the table")->required();
    falsify->add_option("-n,--coefficients", o.n, "coefficients (default: all completable)");
    add_table_opts(falsify, o.topt);
    add_common(falsify, o.common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed())
            return run_build_ghost(o.table, o.n, o.require_complete, o.topt, o.common);
        if (newton->parsed())
            return run_newton(o.table, o.ghost_file, o.n, o.topt, o.weight, o.generic, o.format,
                              o.allow_off_component, o.common);
        if (predict->parsed()) return run_predict(o.table, o.n, o.topt, o.weights, o.common);
        if (compare->parsed())
            return run_compare(o.table, o.slopes, o.n, o.topt, o.weights, o.common);
        if (classify->parsed())
            return run_classify(o.rep, o.crystalline_weight, o.slope, o.trace, o.p, o.common);
        if (check_regular->parsed()) return run_check_regular(o.slopes, o.common);
        if (check_gm->parsed()) return run_check_gm(o.slopes, o.k, o.k2, o.h, o.common);
        if (falsify->parsed())
            return run_falsify(o.table, o.slopes, o.rep, o.n, o.topt, o.common);
    } catch (const ghost::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
