// term.hpp -- CCS abstract syntax: names, labels, process terms, definitions.

#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccsw {

// Channel name. Valid names match [a-z][a-zA-Z0-9_]*.
struct Name {
  std::string text;

  Name() = default;
  explicit Name(std::string t) : text(std::move(t)) {}
  auto operator<=>(const Name&) const = default;
};

bool valid_name(const std::string& s);
bool valid_const(const std::string& s);  // [A-Z][a-zA-Z0-9_]*

// A transition label: a name, a coname, or the silent action tau.
// tau never appears in source terms; it arises only from synchronization.
struct Label {
  enum class Kind { Name, Coname, Tau };

  Kind kind = Kind::Tau;
  Name name;  // meaningless when kind == Tau

  static Label act(Name n) { return Label{Kind::Name, std::move(n)}; }
  static Label coact(Name n) { return Label{Kind::Coname, std::move(n)}; }
  static Label tau() { return Label{Kind::Tau, Name{}}; }

  bool is_tau() const { return kind == Kind::Tau; }

  // Complement swaps name and coname. Calling it on tau is a logic error.
  Label complement() const;

  // Rendered as `a`, `'a`, `tau`.
  std::string str() const;

  // True iff the label mentions the given restriction name (a or 'a).
  bool mentions(const Name& a) const { return !is_tau() && name == a; }

  auto operator<=>(const Label&) const = default;
};

struct Process;
using ProcessPtr = std::shared_ptr<const Process>;

enum class Op { Nil, Prefix, Sum, Par, Restrict, Relabel, Const };

// One pair of a relabeling [from <- to]: occurrences of `from` become `to`.
struct Renaming {
  Name from, to;
  auto operator<=>(const Renaming&) const = default;
};

// Immutable process node. Field use by operator:
//   Prefix:   label, key (CCSK only), kids[0] = continuation
//   Sum:      kids (n-ary, size >= 2)
//   Par:      kids[0], kids[1]
//   Restrict: kids[0], bound
//   Relabel:  kids[0], renames (pairwise-distinct `from` names)
//   Const:    constant
struct Process {
  Op op = Op::Nil;
  Label label;
  std::optional<int> key;
  std::vector<ProcessPtr> kids;
  Name bound;
  std::vector<Renaming> renames;
  std::string constant;
};

ProcessPtr make_nil();
ProcessPtr make_prefix(Label l, ProcessPtr cont, std::optional<int> key = std::nullopt);
// Empty list collapses to Nil, a singleton to its element.
ProcessPtr make_sum(std::vector<ProcessPtr> kids);
ProcessPtr make_par(ProcessPtr left, ProcessPtr right);
ProcessPtr make_res(ProcessPtr body, Name bound);
ProcessPtr make_rel(ProcessPtr body, std::vector<Renaming> renames);
ProcessPtr make_const(std::string identifier);

bool equal(const Process& a, const Process& b);
inline bool equal(const ProcessPtr& a, const ProcessPtr& b) { return equal(*a, *b); }

// Number of AST nodes excluding Nil (the enumeration size metric).
int term_size(const Process& p);

// True iff no prefix carries a key.
bool is_std(const Process& p);

// Largest key present, 0 if none.
int max_key(const Process& p);

// Constant environment. Bodies may refer to any constant in the map,
// including recursively; closedness is validated by the loaders.
struct Defs {
  std::map<std::string, ProcessPtr> map;

  const Process* find(const std::string& id) const {
    auto it = map.find(id);
    return it == map.end() ? nullptr : it->second.get();
  }
  bool empty() const { return map.empty(); }
};

struct UndefinedConstant : std::runtime_error {
  explicit UndefinedConstant(const std::string& id)
      : std::runtime_error("undefined constant: " + id), identifier(id) {}
  std::string identifier;
};

// Every constant reachable from `p` (and transitively from bodies) must be
// a key of `defs`; throws UndefinedConstant otherwise.
void check_constants(const Process& p, const Defs& defs);

// Collect every identifier of a Const node in `p` (no recursion into defs).
std::set<std::string> constants_of(const Process& p);

}  // namespace ccsw
