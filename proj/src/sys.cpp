#include <algorithm>

#include "ccsw/binding.hpp"
#include "ccsw/print.hpp"
#include "ccsw/transition.hpp"

namespace ccsw {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Act: return "act";
    case Rule::Sum: return "sum";
    case Rule::Com1: return "com1";
    case Rule::Com2: return "com2";
    case Rule::Syn: return "syn";
    case Rule::Res: return "res";
    case Rule::Rel: return "rel";
    case Rule::Rec: return "rec";
    case Rule::Con: return "con";
  }
  return "?";
}

std::string derivation_fingerprint(const Transition& t) {
  std::string s = "[";
  s += pretty(*t.source);
  s += " -";
  s += t.label.str();
  s += "-> ";
  s += pretty(*t.target);
  s += " ";
  s += rule_name(t.rule);
  for (const auto& pr : t.premises) s += derivation_fingerprint(pr);
  s += "]";
  return s;
}

namespace {

std::vector<Transition> go(const ProcessPtr& p, const Defs& defs, int budget, bool& hit) {
  std::vector<Transition> out;
  switch (p->op) {
    case Op::Nil:
      break;
    case Op::Prefix: {
      if (p->key) throw std::invalid_argument("sys_transitions requires a key-free term");
      out.push_back(Transition{p, p->label, p->kids[0], Rule::Act, {}});
      break;
    }
    case Op::Sum: {
      for (const auto& kid : p->kids)
        for (auto& t : go(kid, defs, budget, hit))
          out.push_back(Transition{p, t.label, t.target, Rule::Sum, {std::move(t)}});
      break;
    }
    case Op::Par: {
      auto ls = go(p->kids[0], defs, budget, hit);
      auto rs = go(p->kids[1], defs, budget, hit);
      for (const auto& t : ls)
        out.push_back(Transition{p, t.label, make_par(t.target, p->kids[1]), Rule::Com1, {t}});
      for (const auto& t : rs)
        out.push_back(Transition{p, t.label, make_par(p->kids[0], t.target), Rule::Com2, {t}});
      for (const auto& tl : ls) {
        if (tl.label.is_tau()) continue;
        for (const auto& tr : rs)
          if (tr.label == tl.label.complement())
            out.push_back(Transition{
                p, Label::tau(), make_par(tl.target, tr.target), Rule::Syn, {tl, tr}});
      }
      break;
    }
    case Op::Restrict: {
      for (auto& t : go(p->kids[0], defs, budget, hit)) {
        if (t.label.mentions(p->bound)) continue;  // side condition a not in alpha
        out.push_back(
            Transition{p, t.label, make_res(t.target, p->bound), Rule::Res, {std::move(t)}});
      }
      break;
    }
    case Op::Relabel: {
      for (auto& t : go(p->kids[0], defs, budget, hit)) {
        Label mapped = apply_to_label(t.label, p->renames);
        out.push_back(Transition{
            p, mapped, make_rel(t.target, p->renames), Rule::Rel, {std::move(t)}});
      }
      break;
    }
    case Op::Const: {
      if (budget <= 0) {
        hit = true;
        break;
      }
      const Process* body = defs.find(p->constant);
      if (!body) throw UndefinedConstant(p->constant);
      ProcessPtr bp = std::make_shared<Process>(*body);
      for (auto& t : go(bp, defs, budget - 1, hit))
        out.push_back(Transition{p, t.label, t.target, Rule::Rec, {std::move(t)}});
      break;
    }
  }
  return out;
}

}  // namespace

StepResult sys_transitions(const ProcessPtr& p, const Defs& defs, int unfold_budget) {
  StepResult res;
  res.transitions = go(p, defs, unfold_budget, res.budget_hit);
  std::sort(res.transitions.begin(), res.transitions.end(),
            [](const Transition& a, const Transition& b) {
              return derivation_fingerprint(a) < derivation_fingerprint(b);
            });
  res.transitions.erase(
      std::unique(res.transitions.begin(), res.transitions.end(),
                  [](const Transition& a, const Transition& b) {
                    return derivation_fingerprint(a) == derivation_fingerprint(b);
                  }),
      res.transitions.end());
  return res;
}

}  // namespace ccsw
