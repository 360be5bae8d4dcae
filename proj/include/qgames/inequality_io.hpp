#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "qgames/bell_model.hpp"

namespace qgames {

enum class InequalityFamily { linear, correlator, quadratic, polynomial };

InequalityFamily parse_family(const std::string& name);
std::string to_string(InequalityFamily family);

using AnyInequality = std::variant<LinearInequality, CorrelatorInequality, QuadraticInequality, PolynomialInequality>;

InequalityFamily family_of(const AnyInequality& ineq);

/// Line-oriented text format; see docs/inequality_format.md. Errors carry the
/// 1-based line number.
AnyInequality read_inequality(std::istream& in);
AnyInequality read_inequality_file(const std::string& path);

/// Writes a file that read_inequality maps back to an equal inequality.
/// Linear coefficients that are exactly zero are omitted.
void write_inequality(std::ostream& out, const AnyInequality& ineq);

}  // namespace qgames
