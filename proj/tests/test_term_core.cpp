// Parsing, printing, free names, substitution, alpha-canonical forms.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccsw/binding.hpp"
#include "ccsw/enumerate.hpp"
#include "ccsw/parse.hpp"
#include "ccsw/print.hpp"

using namespace ccsw;

namespace {

Name nm(const char* s) { return Name{std::string(s)}; }

ProcessPtr P(const std::string& text, const Defs& defs = {}) { return parse(text, defs); }

}  // namespace

TEST_CASE("parse basics") {
  CHECK(parse("0")->op == Op::Nil);

  auto p = P("a.0 | 'a.0");
  REQUIRE(p->op == Op::Par);
  CHECK(p->kids[0]->op == Op::Prefix);
  CHECK(p->kids[0]->label == Label::act(nm("a")));
  CHECK(p->kids[1]->label == Label::coact(nm("a")));

  auto r = P("(a.0 + b.0)\\a");
  REQUIRE(r->op == Op::Restrict);
  CHECK(r->bound == nm("a"));
  REQUIRE(r->kids[0]->op == Op::Sum);
  CHECK(r->kids[0]->kids.size() == 2);
}

TEST_CASE("parse precedence") {
  // Restriction binds tighter than prefix: a.0\b is a.(0\b).
  auto p = P("a.0\\b");
  REQUIRE(p->op == Op::Prefix);
  CHECK(p->kids[0]->op == Op::Restrict);

  // | binds tighter than +.
  auto q = P("a.0 | b.0 + c.0");
  REQUIRE(q->op == Op::Sum);
  CHECK(q->kids[0]->op == Op::Par);

  // Left-associative |, n-ary flattened +.
  auto r = P("a.0 | b.0 | c.0");
  REQUIRE(r->op == Op::Par);
  CHECK(r->kids[0]->op == Op::Par);
  auto s = P("a.0 + b.0 + c.0");
  REQUIRE(s->op == Op::Sum);
  CHECK(s->kids.size() == 3);
  // ...but parenthesized sums stay nested.
  auto t = P("(a.0 + b.0) + c.0");
  REQUIRE(t->op == Op::Sum);
  CHECK(t->kids.size() == 2);
  CHECK(t->kids[0]->op == Op::Sum);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse("a."), ParseError);
  CHECK_THROWS_AS(parse("(a.0"), ParseError);
  CHECK_THROWS_AS(parse("a.0 |"), ParseError);
  CHECK_THROWS_AS(parse("a[0].0"), ParseError);      // keys are positive
  CHECK_THROWS_AS(parse("0[a<-b,a<-c]"), ParseError);  // duplicate source
  CHECK_THROWS_AS(parse("A"), UndefinedConstant);
  try {
    parse("a.0 +\n+ b.0");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("defs files") {
  Defs defs = parse_defs("# comment\nA = a.A\nB = 'b.0 + A\n");
  CHECK(defs.map.size() == 2);
  CHECK(parse("A | B", defs)->op == Op::Par);
  CHECK_THROWS_AS(parse_defs("A = B"), UndefinedConstant);
  CHECK_THROWS_AS(parse_defs("A = a.0\nA = b.0"), ParseError);
}

TEST_CASE("keyed prefixes") {
  auto p = P("a[1].0 | 'a[1].0");
  CHECK_FALSE(is_std(*p));
  CHECK(max_key(*p) == 1);
  CHECK(pretty(p) == "a[1].0 | 'a[1].0");
  CHECK_THROWS_AS(parse("a[1].0 | a[1].0"), ParseError);       // non-complementary
  CHECK_THROWS_AS(parse("a[1].0 | 'a[1].a[1].0"), ParseError);  // three occurrences
}

TEST_CASE("free names") {
  CHECK(free_names(*P("a.0")) == std::set<Name>{nm("a")});
  CHECK(free_names(*P("(a.0)\\a")).empty());
  CHECK(free_names(*P("(a.0)[a<-b]")) == std::set<Name>{nm("b")});
  CHECK(free_names(*P("'a.b.0 + c.0")) == std::set<Name>{nm("a"), nm("b"), nm("c")});

  Defs defs = parse_defs("A = a.A");
  CHECK(free_names(*parse("A", defs), &defs) == std::set<Name>{nm("a")});
  CHECK(free_names(*parse("A\\a", defs), &defs).empty());
}

TEST_CASE("apply_relabeling") {
  Defs none;
  auto b0 = apply_relabeling(*P("a.0"), {{nm("a"), nm("b")}});
  CHECK(pretty(b0) == "b.0");

  // Capture forces the bound name to be freshened.
  auto fresh = apply_relabeling(*P("(a.0)\\b"), {{nm("a"), nm("b")}});
  REQUIRE(fresh->op == Op::Restrict);
  CHECK(fresh->bound != nm("b"));
  CHECK(pretty(fresh->kids[0]) == "b.0");

  // Simultaneous, not sequential.
  auto swapped = apply_relabeling(*P("a.0"), {{nm("a"), nm("b")}, {nm("b"), nm("a")}});
  CHECK(pretty(swapped) == "b.0");
  auto both = apply_relabeling(*P("a.b.0"), {{nm("a"), nm("b")}, {nm("b"), nm("a")}});
  CHECK(pretty(both) == "b.a.0");

  // Identity substitution is the identity.
  auto idp = apply_relabeling(*P("(a.0)\\b | c.0"), {{nm("a"), nm("a")}});
  CHECK(pretty(idp) == "(a.0)\\b | c.0");
}

TEST_CASE("alpha_canon") {
  CHECK(pretty(alpha_canon(*P("(a.0)\\a"))) == pretty(alpha_canon(*P("(b.0)\\b"))));
  CHECK(pretty(alpha_canon(*P("a.0"))) != pretty(alpha_canon(*P("b.0"))));

  // Shadowing resolves to two distinct bound names.
  auto shadow = alpha_canon(*P("((a.0)\\a)\\a"));
  REQUIRE(shadow->op == Op::Restrict);
  CHECK(shadow->bound != shadow->kids[0]->bound);

  // Free names are untouched and binder names avoid them.
  auto mixed = alpha_canon(*P("x0.0 | (a.0)\\a"));
  CHECK(free_names(*mixed) == std::set<Name>{nm("x0")});
  CHECK(pretty(mixed) == "x0.0 | (x1.0)\\x1");
}

TEST_CASE("alpha_canon with constants is conservative") {
  Defs defs = parse_defs("A = a.0");
  // a is free in A: the binder cannot be renamed.
  auto pinned = alpha_canon(*parse("A\\a", defs), &defs);
  CHECK(pretty(pinned) == "A\\a");
  // b is not free in A: renaming is safe.
  auto open = alpha_canon(*parse("A\\b", defs), &defs);
  CHECK(pretty(open) == "A\\x0");
  // Without defs everything over a constant is pinned.
  CHECK(pretty(alpha_canon(*parse("A\\b", defs))) == "A\\b");
}

TEST_CASE("enumeration ground cases") {
  auto one = enumerate_terms(1, {nm("a")}, {});
  std::vector<std::string> got;
  for (const auto& t : one) got.push_back(pretty(t));
  CHECK(got == std::vector<std::string>{"0", "a.0", "'a.0"});

  CHECK(enumerate_terms(0, {nm("a")}, {}).empty());
}

TEST_CASE("enumeration size-3 regression count") {
  // Frozen from the enumerator itself; guards accidental grammar drift.
  auto ts = enumerate_terms(3, {nm("a")}, {});
  CHECK(ts.size() == 23);  // Nil + 2 + 4 + 16
  for (const auto& t : ts) CHECK(term_size(*t) <= 3);
}

TEST_CASE("round trip: parse(pretty(P)) == P on enumerated terms") {
  EnumFeatures all;
  all.restriction = true;
  all.relabeling = true;
  for (const auto& t : enumerate_terms(4, {nm("a"), nm("b")}, all)) {
    ProcessPtr back = parse(pretty(t));
    CHECK(equal(back, t));
  }
  for (const auto& t : enumerate_terms(7, {nm("a"), nm("b")}, {})) {
    ProcessPtr back = parse(pretty(t));
    if (!equal(back, t)) {
      CAPTURE(pretty(t));
      CHECK(equal(back, t));
    }
  }
}

TEST_CASE("alpha_canon properties on enumerated terms") {
  EnumFeatures f;
  f.restriction = true;
  for (const auto& t : enumerate_terms(5, {nm("a"), nm("b")}, f)) {
    auto c = alpha_canon(*t);
    CHECK(equal(alpha_canon(*c), c));           // idempotent
    CHECK(free_names(*c) == free_names(*t));    // fn preserved
  }
}

TEST_CASE("identity relabeling is identity up to alpha") {
  EnumFeatures f;
  f.restriction = true;
  f.relabeling = true;
  for (const auto& t : enumerate_terms(4, {nm("a"), nm("b")}, f)) {
    auto u = apply_relabeling(*t, {{nm("a"), nm("a")}});
    CHECK(alpha_key(*u) == alpha_key(*t));
  }
}
