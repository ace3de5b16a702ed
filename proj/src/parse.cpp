#include "ccsw/parse.hpp"

#include <cctype>
#include <map>
#include <vector>

#include "ccsw/print.hpp"

namespace ccsw {

namespace {

enum class Tok { Name, Const, Int, Quote, Dot, Bar, Plus, Backslash, LParen, RParen, LBrack, RBrack, Arrow, Comma, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_.line, tok_.col);
  }

 private:
  void advance() {
    skip_blank();
    tok_ = Token{Tok::End, "", line_, col_};
    if (pos_ >= src_.size()) return;
    char c = src_[pos_];
    if (std::islower(static_cast<unsigned char>(c))) {
      tok_ = Token{Tok::Name, word(), tok_.line, tok_.col};
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      tok_ = Token{Tok::Const, word(), tok_.line, tok_.col};
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string t;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t += get();
      tok_ = Token{Tok::Int, t, tok_.line, tok_.col};
    } else if (c == '<' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
      get();
      get();
      tok_ = Token{Tok::Arrow, "<-", tok_.line, tok_.col};
    } else {
      Tok k;
      switch (c) {
        case '\'': k = Tok::Quote; break;
        case '.': k = Tok::Dot; break;
        case '|': k = Tok::Bar; break;
        case '+': k = Tok::Plus; break;
        case '\\': k = Tok::Backslash; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '[': k = Tok::LBrack; break;
        case ']': k = Tok::RBrack; break;
        case ',': k = Tok::Comma; break;
        case '=': k = Tok::Equals; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
      }
      tok_ = Token{k, std::string(1, get()), tok_.line, tok_.col};
    }
  }

  void skip_blank() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) get();
      if (pos_ < src_.size() && src_[pos_] == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') get();
        continue;
      }
      break;
    }
  }

  std::string word() {
    std::string t;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      t += get();
    return t;
  }

  char get() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(Lexer& lx) : lx_(lx) {}

  ProcessPtr proc() {
    std::vector<ProcessPtr> alts;
    alts.push_back(par());
    while (lx_.peek().kind == Tok::Plus) {
      lx_.take();
      alts.push_back(par());
    }
    if (alts.size() == 1) return alts[0];
    return make_sum(std::move(alts));
  }

 private:
  ProcessPtr par() {
    ProcessPtr left = pref();
    while (lx_.peek().kind == Tok::Bar) {
      lx_.take();
      left = make_par(std::move(left), pref());
    }
    return left;
  }

  ProcessPtr pref() {
    const Tok k = lx_.peek().kind;
    if (k == Tok::Name || k == Tok::Quote) {
      Label l = label();
      std::optional<int> key;
      if (lx_.peek().kind == Tok::LBrack) {
        lx_.take();
        Token n = expect(Tok::Int, "key");
        long v = std::stol(n.text);
        if (v < 1) throw ParseError("keys are positive integers", n.line, n.col);
        key = static_cast<int>(v);
        expect(Tok::RBrack, "']'");
      }
      expect(Tok::Dot, "'.' after prefix label");
      return make_prefix(std::move(l), pref(), key);
    }
    return post();
  }

  ProcessPtr post() {
    ProcessPtr p = atom();
    for (;;) {
      if (lx_.peek().kind == Tok::Backslash) {
        lx_.take();
        Token n = expect(Tok::Name, "restriction name");
        p = make_res(std::move(p), Name{n.text});
      } else if (lx_.peek().kind == Tok::LBrack) {
        lx_.take();
        p = make_rel(std::move(p), renames());
        expect(Tok::RBrack, "']'");
      } else {
        return p;
      }
    }
  }

  ProcessPtr atom() {
    Token t = lx_.take();
    switch (t.kind) {
      case Tok::Int:
        if (t.text == "0") return make_nil();
        throw ParseError("unexpected number", t.line, t.col);
      case Tok::Const:
        return make_const(t.text);
      case Tok::LParen: {
        ProcessPtr p = proc();
        expect(Tok::RParen, "')'");
        return p;
      }
      default:
        throw ParseError("expected a process", t.line, t.col);
    }
  }

  Label label() {
    if (lx_.peek().kind == Tok::Quote) {
      lx_.take();
      Token n = expect(Tok::Name, "name after '");
      return Label::coact(Name{n.text});
    }
    Token n = expect(Tok::Name, "name");
    return Label::act(Name{n.text});
  }

  std::vector<Renaming> renames() {
    std::vector<Renaming> out;
    std::set<Name> lhs;
    for (;;) {
      Token f = expect(Tok::Name, "relabeling source name");
      expect(Tok::Arrow, "'<-'");
      Token to = expect(Tok::Name, "relabeling target name");
      if (!lhs.insert(Name{f.text}).second)
        throw ParseError("duplicate relabeling source '" + f.text + "'", f.line, f.col);
      out.push_back(Renaming{Name{f.text}, Name{to.text}});
      if (lx_.peek().kind != Tok::Comma) return out;
      lx_.take();
    }
  }

  Token expect(Tok k, const std::string& what) {
    if (lx_.peek().kind != k) lx_.fail("expected " + what);
    return lx_.take();
  }

  Lexer& lx_;
};

// Key invariants: at most two occurrences per key; exactly two only for
// complementary labels.
void check_keys(const Process& p, std::map<int, std::vector<Label>>& seen) {
  if (p.op == Op::Prefix && p.key) seen[*p.key].push_back(p.label);
  for (const auto& k : p.kids) check_keys(*k, seen);
}

void validate_keys(const Process& p) {
  std::map<int, std::vector<Label>> seen;
  check_keys(p, seen);
  for (const auto& [key, labels] : seen) {
    if (labels.size() > 2)
      throw ParseError("key " + std::to_string(key) + " occurs more than twice", 1, 1);
    if (labels.size() == 2 && labels[0] != labels[1].complement())
      throw ParseError("key " + std::to_string(key) + " joins non-complementary labels", 1, 1);
  }
}

}  // namespace

ProcessPtr parse(const std::string& text, const Defs& defs) {
  Lexer lx(text);
  Parser ps(lx);
  ProcessPtr p = ps.proc();
  if (lx.peek().kind != Tok::End) lx.fail("trailing input");
  validate_keys(*p);
  check_constants(*p, defs);
  return p;
}

Defs parse_defs(const std::string& text) {
  Defs defs;
  size_t start = 0;
  int lineno = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    ++lineno;
    start = end + 1;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;

    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'CONST = proc'", lineno, 1);
    std::string id = line.substr(0, eq);
    while (!id.empty() && std::isspace(static_cast<unsigned char>(id.back()))) id.pop_back();
    while (!id.empty() && std::isspace(static_cast<unsigned char>(id.front()))) id.erase(0, 1);
    if (!valid_const(id)) throw ParseError("bad constant name '" + id + "'", lineno, 1);
    if (defs.map.count(id)) throw ParseError("duplicate definition of " + id, lineno, 1);

    Lexer lx(line.substr(eq + 1));
    Parser ps(lx);
    ProcessPtr body = ps.proc();
    if (lx.peek().kind != Tok::End)
      throw ParseError("trailing input in definition of " + id, lineno, 1);
    if (!is_std(*body)) throw ParseError("definition bodies must be key-free", lineno, 1);
    defs.map.emplace(id, std::move(body));
  }
  for (const auto& [id, body] : defs.map) check_constants(*body, defs);
  return defs;
}

}  // namespace ccsw
