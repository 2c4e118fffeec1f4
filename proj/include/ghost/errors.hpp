#pragma once

#include <stdexcept>
#include <string>

namespace ghost {

// Machine-checkable failure kinds. Messages carry the specifics; tests and
// the CLI dispatch on the code.
enum class Errc {
    bad_prime,
    bad_weight,
    zero_input,
    indeterminate_valuation,
    schema_violation,
    empty_table,
    progression_gap,
    off_component_row,
    negative_new_dimension,
    nonmonotone_dimension,
    tail_not_affine,
    table_too_short,
    incomplete_coefficient,
    off_component_weight,
    duplicate_index,
    missing_origin,
    insufficient_length,
    unknown_weight,
    coverage_gap,
    dataset_invariant,
    flavor_mismatch,
    bad_modulus,
    bad_field_element,
    trace_required,
    out_of_range,
    bad_descriptor,
    bad_argument,
    parse_error,
};

inline const char* errc_name(Errc c)
{
    switch (c) {
        case Errc::bad_prime: return "bad-prime";
        case Errc::bad_weight: return "bad-weight";
        case Errc::zero_input: return "zero-input";
        case Errc::indeterminate_valuation: return "indeterminate-valuation";
        case Errc::schema_violation: return "schema-violation";
        case Errc::empty_table: return "empty-table";
        case Errc::progression_gap: return "progression-gap";
        case Errc::off_component_row: return "off-component-row";
        case Errc::negative_new_dimension: return "negative-new-dimension";
        case Errc::nonmonotone_dimension: return "nonmonotone-dimension";
        case Errc::tail_not_affine: return "tail-not-affine";
        case Errc::table_too_short: return "table-too-short";
        case Errc::incomplete_coefficient: return "incomplete-coefficient";
        case Errc::off_component_weight: return "off-component-weight";
        case Errc::duplicate_index: return "duplicate-index";
        case Errc::missing_origin: return "missing-origin";
        case Errc::insufficient_length: return "insufficient-length";
        case Errc::unknown_weight: return "unknown-weight";
        case Errc::coverage_gap: return "coverage-gap";
        case Errc::dataset_invariant: return "dataset-invariant";
        case Errc::flavor_mismatch: return "flavor-mismatch";
        case Errc::bad_modulus: return "bad-modulus";
        case Errc::bad_field_element: return "bad-field-element";
        case Errc::trace_required: return "trace-required";
        case Errc::out_of_range: return "out-of-range";
        case Errc::bad_descriptor: return "bad-descriptor";
        case Errc::bad_argument: return "bad-argument";
        case Errc::parse_error: return "parse-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace ghost
