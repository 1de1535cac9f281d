#pragma once
/** \file numfmt.hpp
    Fixed-format numeric output. Every real written by this project (CSV and
    JSON alike) goes through real17(), which guarantees value-preserving
    round trips and byte-identical output for identical inputs.
*/
#include <cstdio>
#include <string>

namespace numfmt {

/// A double rendered at 17 significant digits ("%.17g", C locale semantics).
inline std::string real17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

}  // namespace numfmt
