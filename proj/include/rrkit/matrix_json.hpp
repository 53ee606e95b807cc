#pragma once

#include <string>
#include <string_view>

#include "rrkit/field.hpp"

namespace rrkit {

/// Reads {"modulus": p, "entries": [[...], ...]}. Entries may be negative
/// and are reduced mod p. Without "modulus" the default modulus for the
/// dimension is used. Throws ParseError on malformed JSON, NotPrime for a
/// composite modulus and ArityError for a non-square matrix.
FieldMatrix parse_matrix_json(std::string_view text);
FieldMatrix read_matrix_file(const std::string& path);
std::string matrix_to_json(const FieldMatrix& m);

}  // namespace rrkit
