#include "ccsw/print.hpp"

namespace ccsw {

namespace {

// Precedence levels: sum 0 < par 1 < prefix 2 < postfix 3 < atom 4.
int prec(const Process& p) {
  switch (p.op) {
    case Op::Sum: return 0;
    case Op::Par: return 1;
    case Op::Prefix: return 2;
    case Op::Restrict:
    case Op::Relabel: return 3;
    case Op::Nil:
    case Op::Const: return 4;
  }
  return 4;
}

void print(const Process& p, int min_prec, std::string& out) {
  const bool parens = prec(p) < min_prec;
  if (parens) out += '(';
  switch (p.op) {
    case Op::Nil:
      out += '0';
      break;
    case Op::Const:
      out += p.constant;
      break;
    case Op::Prefix:
      out += p.label.str();
      if (p.key) out += '[' + std::to_string(*p.key) + ']';
      out += '.';
      print(*p.kids[0], 2, out);
      break;
    case Op::Par:
      // Left-associative: an unparenthesized left Par reparses identically.
      print(*p.kids[0], 1, out);
      out += " | ";
      print(*p.kids[1], 2, out);
      break;
    case Op::Sum:
      for (size_t i = 0; i < p.kids.size(); ++i) {
        if (i) out += " + ";
        print(*p.kids[i], 1, out);
      }
      break;
    case Op::Restrict:
      print(*p.kids[0], 3, out);
      out += '\\';
      out += p.bound.text;
      break;
    case Op::Relabel:
      print(*p.kids[0], 3, out);
      out += '[';
      out += pretty(p.renames);
      out += ']';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string pretty(const std::vector<Renaming>& renames) {
  std::string out;
  for (size_t i = 0; i < renames.size(); ++i) {
    if (i) out += ",";
    out += renames[i].from.text + "<-" + renames[i].to.text;
  }
  return out;
}

std::string pretty(const Process& p) {
  std::string out;
  print(p, 0, out);
  return out;
}

}  // namespace ccsw
