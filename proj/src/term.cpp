#include "ccsw/term.hpp"

namespace ccsw {

bool valid_name(const std::string& s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

bool valid_const(const std::string& s) {
  if (s.empty() || s[0] < 'A' || s[0] > 'Z') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

Label Label::complement() const {
  switch (kind) {
    case Kind::Name: return Label{Kind::Coname, name};
    case Kind::Coname: return Label{Kind::Name, name};
    case Kind::Tau: break;
  }
  throw std::logic_error("tau has no complement");
}

std::string Label::str() const {
  switch (kind) {
    case Kind::Name: return name.text;
    case Kind::Coname: return "'" + name.text;
    case Kind::Tau: return "tau";
  }
  return "?";
}

ProcessPtr make_nil() {
  static const ProcessPtr n = std::make_shared<Process>();
  return n;
}

ProcessPtr make_prefix(Label l, ProcessPtr cont, std::optional<int> key) {
  auto p = std::make_shared<Process>();
  p->op = Op::Prefix;
  p->label = std::move(l);
  p->key = key;
  p->kids.push_back(std::move(cont));
  return p;
}

ProcessPtr make_sum(std::vector<ProcessPtr> kids) {
  if (kids.empty()) return make_nil();
  if (kids.size() == 1) return kids[0];
  auto p = std::make_shared<Process>();
  p->op = Op::Sum;
  p->kids = std::move(kids);
  return p;
}

ProcessPtr make_par(ProcessPtr left, ProcessPtr right) {
  auto p = std::make_shared<Process>();
  p->op = Op::Par;
  p->kids.push_back(std::move(left));
  p->kids.push_back(std::move(right));
  return p;
}

ProcessPtr make_res(ProcessPtr body, Name bound) {
  auto p = std::make_shared<Process>();
  p->op = Op::Restrict;
  p->kids.push_back(std::move(body));
  p->bound = std::move(bound);
  return p;
}

ProcessPtr make_rel(ProcessPtr body, std::vector<Renaming> renames) {
  auto p = std::make_shared<Process>();
  p->op = Op::Relabel;
  p->kids.push_back(std::move(body));
  p->renames = std::move(renames);
  return p;
}

ProcessPtr make_const(std::string identifier) {
  auto p = std::make_shared<Process>();
  p->op = Op::Const;
  p->constant = std::move(identifier);
  return p;
}

bool equal(const Process& a, const Process& b) {
  if (&a == &b) return true;
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Nil: return true;
    case Op::Prefix:
      if (a.label != b.label || a.key != b.key) return false;
      break;
    case Op::Sum:
    case Op::Par:
      if (a.kids.size() != b.kids.size()) return false;
      break;
    case Op::Restrict:
      if (a.bound != b.bound) return false;
      break;
    case Op::Relabel:
      if (a.renames != b.renames) return false;
      break;
    case Op::Const: return a.constant == b.constant;
  }
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

int term_size(const Process& p) {
  int n = (p.op == Op::Nil) ? 0 : 1;
  for (const auto& k : p.kids) n += term_size(*k);
  return n;
}

bool is_std(const Process& p) {
  if (p.op == Op::Prefix && p.key.has_value()) return false;
  for (const auto& k : p.kids)
    if (!is_std(*k)) return false;
  return true;
}

int max_key(const Process& p) {
  int m = (p.op == Op::Prefix && p.key) ? *p.key : 0;
  for (const auto& k : p.kids) m = std::max(m, max_key(*k));
  return m;
}

std::set<std::string> constants_of(const Process& p) {
  std::set<std::string> out;
  if (p.op == Op::Const) out.insert(p.constant);
  for (const auto& k : p.kids) {
    auto sub = constants_of(*k);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

void check_constants(const Process& p, const Defs& defs) {
  std::set<std::string> todo = constants_of(p), seen;
  while (!todo.empty()) {
    std::string id = *todo.begin();
    todo.erase(todo.begin());
    if (!seen.insert(id).second) continue;
    const Process* body = defs.find(id);
    if (!body) throw UndefinedConstant(id);
    for (const auto& c : constants_of(*body))
      if (!seen.count(c)) todo.insert(c);
  }
}

}  // namespace ccsw
