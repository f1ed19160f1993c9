#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gptwb/instruments.hpp"

namespace gptwb {

/// Built-in spaces: "classical:d", "polygon:n" (alias "S_n"), "ball:d",
/// "square", and "dsum:<lit>+<lit>+...". Polygons and balls need the float backend.
template <Field T>
SpacePtr<T> parse_space_literal(std::string_view literal);

/// StateSpace JSON:
///   {"kind": "polytope", "name": ..., "vertices": [[...], ...], "unit": [...]}
///   {"kind": "ball", "dim": d, "norm": "euclidean"}
///   {"kind": "direct_sum", "summands": [<space>, ...]}
///   {"literal": "polygon:5"}
/// Numbers may be JSON numbers or decimal/fraction strings.
template <Field T>
SpacePtr<T> parse_state_space_json(std::string_view text);

/// Observable JSON: {"space_ref": <literal>} or {"space": <space>}, plus
/// "effects": [[...], ...] and optional "outcomes": [labels].
template <Field T>
Observable<T> parse_observable_json(std::string_view text);

/// A single observable object or an array of them.
template <Field T>
std::vector<Observable<T>> parse_observable_list_json(std::string_view text);

/// {"observable": <observable>, "prepared_states": [[...]], "output_space_ref": <literal>}
/// ("output_space" may hold an inline space instead).
template <Field T>
MPInstrument<T> parse_instrument_json(std::string_view text);

/// CommMatrix as CSV (one row per state, '#' comments) or JSON
/// ({"matrix": [[...]]} or a bare array of rows).
Matrix<double> parse_comm_matrix(std::string_view text);

/// Reads a whole file; throws Error on failure.
std::string read_file(const std::string& path);

/// Observable JSON in the schema accepted by parse_observable_json.
template <Field T>
std::string observable_to_json(const Observable<T>& a);

}  // namespace gptwb
