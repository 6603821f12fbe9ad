#pragma once

#include "fraisse/errors.hpp"
#include "fraisse/structures.hpp"

#include <string>
#include <string_view>

namespace fraisse {

// Structure file format, version 1. UTF-8 text, LF line endings, `#` starts
// a comment, blank lines ignored. Sections in order:
//
//   fraisse-structure v1
//   signature
//     <name> <arity> <lipschitz> <lo> <hi>   (one per predicate)
//     const <name>                           (one per constant symbol)
//     diameter <q>                           (optional cap)
//   points
//     <label> <label> ...                    (may span several lines)
//   dist
//     <q>                                    (row i: d(i,0) ... d(i,i-1),
//     <q> <q>                                 for i = 1 .. n-1)
//   pred <name>                              (one section per predicate;
//     <q> <q> ...                             n^arity values, row-major over
//                                             tuples, n per line)
//   const <name> = <label>                   (one per constant symbol)
//
// Rationals are integer or `p/q` numerals, stored in lowest terms. Predicate
// names `const`, `diameter`, `pred` are reserved. The serializer emits fields
// in exactly this order, so serialize/parse round trips are bit-exact.

class ParseError : public DomainError {
  public:
    ParseError(const std::string& message, int line, int column)
        : DomainError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

// Syntax and shape only; the result may violate metric/Lipschitz axioms
// (run validate, or use load_structure). Throws ParseError.
MetricStructure parse_structure(std::string_view text);

// parse_structure + validate; throws ParseError or DomainError with the
// diagnostic list. The common entry point for tools.
StructPtr load_structure(std::string_view text);

// Deterministic canonical emission; parse_structure(serialize_structure(s))
// reproduces s exactly.
std::string serialize_structure(const MetricStructure& s);

// File helpers; errors mention the path.
StructPtr load_structure_file(const std::string& path);
void write_structure_file(const std::string& path, const MetricStructure& s);

}  // namespace fraisse
