// parse.hpp -- recursive-descent parser for CCS / CCSK terms and definition files.

#pragma once

#include <stdexcept>
#include <string>

#include "ccsw/term.hpp"

namespace ccsw {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line(line),
        col(col) {}
  int line, col;
};

// Term grammar (whitespace-insensitive, `#` comments to end of line):
//
//   proc    := sum
//   sum     := par { "+" par }                        (n-ary, flattened)
//   par     := pref { "|" pref }                      (left-associative)
//   pref    := label [ "[" INT "]" ] "." pref | post
//   post    := atom { "\" name | "[" renames "]" }
//   atom    := "0" | CONST | "(" proc ")"
//   label   := name | "'" name
//   renames := name "<-" name { "," name "<-" name }
//
// Restriction and relabeling bind tightest, then ".", then "|", then "+".
// Names match [a-z][a-zA-Z0-9_]*, constants [A-Z][a-zA-Z0-9_]*. The bracket
// after a label is a CCSK key and must hold a positive integer; key
// invariants (at most two occurrences, two only with complementary labels)
// are checked before returning.
//
// Every constant referenced in the term must be defined in `defs`
// (UndefinedConstant otherwise).
ProcessPtr parse(const std::string& text, const Defs& defs = {});

// One `CONST = proc` per line. Bodies may reference any constant of the
// file, including recursively and forward. Bodies must be key-free.
Defs parse_defs(const std::string& text);

}  // namespace ccsw
