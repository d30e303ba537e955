#pragma once

#include <string>

#include "upslope/padic.hpp"

namespace upslope {

// Literal grammar for cyclotomic elements in files and on the CLI: signed
// integer combinations of z^k, where z is the root of unity of the context's
// cyclo_order. Examples: "z^7 - 2*z + 3", "-1", "z".
CycloElt parse_cyclo(const PadicContext* ctx, const std::string& text);

// Canonical serialization: descending powers, balanced coefficient
// representatives (|coeff| <= p^prec / 2), omitted zero terms, "0" for zero.
std::string format_cyclo(const CycloElt& x);

}  // namespace upslope
