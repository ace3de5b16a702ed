#include "ccsw/rccs.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "ccsw/binding.hpp"
#include "ccsw/print.hpp"

namespace ccsw {

bool event_equal(const Event& a, const Event& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Event::Kind::Fork) return true;
  return a.id == b.id && a.label == b.label && a.slot == b.slot &&
         equal(*a.alternatives, *b.alternatives);
}

RProcessPtr make_thread(Memory mem, ProcessPtr code) {
  auto r = std::make_shared<RProcess>();
  r->kind = RProcess::Kind::Thread;
  r->mem = std::move(mem);
  r->code = std::move(code);
  return r;
}

RProcessPtr make_rpar(RProcessPtr l, RProcessPtr r) {
  auto p = std::make_shared<RProcess>();
  p->kind = RProcess::Kind::Par;
  p->left = std::move(l);
  p->right = std::move(r);
  return p;
}

RProcessPtr make_rres(RProcessPtr body, Name bound) {
  auto p = std::make_shared<RProcess>();
  p->kind = RProcess::Kind::Res;
  p->left = std::move(body);
  p->bound = std::move(bound);
  return p;
}

bool requal(const RProcess& a, const RProcess& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case RProcess::Kind::Thread: {
      if (a.mem.size() != b.mem.size() || !equal(*a.code, *b.code)) return false;
      for (size_t i = 0; i < a.mem.size(); ++i)
        if (!event_equal(a.mem[i], b.mem[i])) return false;
      return true;
    }
    case RProcess::Kind::Par:
      return requal(*a.left, *b.left) && requal(*a.right, *b.right);
    case RProcess::Kind::Res:
      return a.bound == b.bound && requal(*a.left, *b.left);
  }
  return false;
}

namespace {

std::string event_str(const Event& e) {
  if (e.kind == Event::Kind::Fork) return "Y";
  std::string s = "#" + std::to_string(e.id) + ":" + e.label.str();
  s += "@" + std::to_string(e.slot);
  if (e.alternatives->op != Op::Nil) s += "+" + pretty(*e.alternatives);
  return s;
}

std::string rprint_with(const RProcess& r,
                        const std::function<std::string(const ProcessPtr&)>& code_str) {
  switch (r.kind) {
    case RProcess::Kind::Thread: {
      std::string s = "<";
      for (auto it = r.mem.rbegin(); it != r.mem.rend(); ++it) {
        if (it != r.mem.rbegin()) s += ";";
        s += event_str(*it);
      }
      s += "> |> ";
      s += code_str(r.code);
      return s;
    }
    case RProcess::Kind::Par:
      return "(" + rprint_with(*r.left, code_str) + " | " + rprint_with(*r.right, code_str) +
             ")";
    case RProcess::Kind::Res:
      return "(" + rprint_with(*r.left, code_str) + ")\\" + r.bound.text;
  }
  return "?";
}

}  // namespace

std::string rprint(const RProcess& r) {
  return rprint_with(r, [](const ProcessPtr& c) { return pretty(*c); });
}

RProcessPtr lift(const ProcessPtr& p) { return make_thread({}, p); }

RProcessPtr distribute(const RProcessPtr& r) {
  switch (r->kind) {
    case RProcess::Kind::Thread: {
      if (r->code->op == Op::Par) {
        Memory forked = r->mem;
        forked.push_back(Event::fork());
        return make_rpar(distribute(make_thread(forked, r->code->kids[0])),
                         distribute(make_thread(forked, r->code->kids[1])));
      }
      return r;
    }
    case RProcess::Kind::Par: {
      RProcessPtr l = distribute(r->left), rr = distribute(r->right);
      if (l == r->left && rr == r->right) return r;
      return make_rpar(std::move(l), std::move(rr));
    }
    case RProcess::Kind::Res: {
      RProcessPtr b = distribute(r->left);
      return b == r->left ? r : make_rres(std::move(b), r->bound);
    }
  }
  return r;
}

RProcessPtr rnormalize(const RProcessPtr& r, const Defs& defs, int unfold_budget) {
  switch (r->kind) {
    case RProcess::Kind::Thread: {
      ProcessPtr code = r->code;
      int budget = unfold_budget;
      for (;;) {
        if (code->op == Op::Const && budget > 0) {
          const Process* body = defs.find(code->constant);
          if (!body) throw UndefinedConstant(code->constant);
          code = std::make_shared<Process>(*body);
          --budget;
          continue;
        }
        if (code->op == Op::Restrict) {
          return make_rres(rnormalize(make_thread(r->mem, code->kids[0]), defs, budget),
                           code->bound);
        }
        if (code->op == Op::Par) {
          Memory forked = r->mem;
          forked.push_back(Event::fork());
          return make_rpar(rnormalize(make_thread(forked, code->kids[0]), defs, budget),
                           rnormalize(make_thread(forked, code->kids[1]), defs, budget));
        }
        break;
      }
      return code == r->code ? r : make_thread(r->mem, code);
    }
    case RProcess::Kind::Par: {
      RProcessPtr l = rnormalize(r->left, defs, unfold_budget);
      RProcessPtr rr = rnormalize(r->right, defs, unfold_budget);
      if (l == r->left && rr == r->right) return r;
      return make_rpar(std::move(l), std::move(rr));
    }
    case RProcess::Kind::Res: {
      RProcessPtr b = rnormalize(r->left, defs, unfold_budget);
      return b == r->left ? r : make_rres(std::move(b), r->bound);
    }
  }
  return r;
}

std::string rkey(const RProcessPtr& r, const Defs& defs, int unfold_budget, RVariant variant) {
  RProcessPtr base = variant == RVariant::Congruence ? rnormalize(r, defs, unfold_budget) : r;
  return rprint_with(*base,
                     [&](const ProcessPtr& c) { return pretty(*alpha_canon(*c, &defs)); });
}

// ---------------------------------------------------------------------------
// Forward

namespace {

int max_event_id(const RProcess& r) {
  switch (r.kind) {
    case RProcess::Kind::Thread: {
      int m = 0;
      for (const auto& e : r.mem)
        if (e.kind == Event::Kind::Act) m = std::max(m, e.id);
      return m;
    }
    case RProcess::Kind::Par:
      return std::max(max_event_id(*r.left), max_event_id(*r.right));
    case RProcess::Kind::Res:
      return max_event_id(*r.left);
  }
  return 0;
}

struct Firing {
  Label label;
  std::function<RProcessPtr(int)> fire;  // instantiated with the chosen event id
};

// The sum branches of a prefix-or-sum code; a lone prefix is a unary sum.
std::vector<ProcessPtr> branches_of(const ProcessPtr& code) {
  if (code->op == Op::Prefix) return {code};
  if (code->op == Op::Sum) return code->kids;
  return {};
}

ProcessPtr rebuild_sum(const Label& l, const ProcessPtr& cont, const ProcessPtr& alternatives,
                       int slot) {
  std::vector<ProcessPtr> kids;
  if (alternatives->op == Op::Sum)
    kids = alternatives->kids;
  else if (alternatives->op != Op::Nil)
    kids = {alternatives};
  if (slot < 0 || slot > static_cast<int>(kids.size())) slot = static_cast<int>(kids.size());
  kids.insert(kids.begin() + slot, make_prefix(l, cont));
  return make_sum(std::move(kids));
}

// Prefix firings of a subtree; `lazy` enables the Rule variant's in-step
// distribution, restriction lifting and unfolding.
void firings(const RProcessPtr& r, const Defs& defs, bool lazy, int unfold_budget,
             std::vector<Firing>& out) {
  switch (r->kind) {
    case RProcess::Kind::Thread: {
      ProcessPtr code = r->code;
      Memory mem = r->mem;
      int budget = unfold_budget;
      if (lazy) {
        for (;;) {
          if (code->op == Op::Const && budget > 0) {
            const Process* body = defs.find(code->constant);
            if (!body) throw UndefinedConstant(code->constant);
            code = std::make_shared<Process>(*body);
            --budget;
            continue;
          }
          if (code->op == Op::Restrict) {
            std::vector<Firing> inner;
            firings(make_thread(mem, code->kids[0]), defs, lazy, budget, inner);
            Name bound = code->bound;
            for (auto& f : inner) {
              if (f.label.mentions(bound)) continue;
              auto fire = f.fire;
              out.push_back(Firing{f.label, [fire, bound](int id) {
                              return make_rres(fire(id), bound);
                            }});
            }
            return;
          }
          if (code->op == Op::Par) {
            Memory forked = mem;
            forked.push_back(Event::fork());
            RProcessPtr lt = make_thread(forked, code->kids[0]);
            RProcessPtr rt = make_thread(forked, code->kids[1]);
            firings_par(lt, rt, defs, lazy, budget, out);
            return;
          }
          break;
        }
      }
      auto bs = branches_of(code);
      for (int i = 0; i < static_cast<int>(bs.size()); ++i) {
        if (bs[i]->op != Op::Prefix) continue;  // only prefix branches can fire
        if (bs[i]->key) throw std::invalid_argument("rccs requires key-free terms");
        Label l = bs[i]->label;
        ProcessPtr cont = bs[i]->kids[0];
        std::vector<ProcessPtr> others;
        for (int j = 0; j < static_cast<int>(bs.size()); ++j)
          if (j != i) others.push_back(bs[j]);
        ProcessPtr alts = make_sum(std::move(others));
        out.push_back(Firing{l, [mem, l, cont, alts, i](int id) {
                        Memory m2 = mem;
                        m2.push_back(Event::act(id, l, alts, i));
                        return make_thread(std::move(m2), cont);
                      }});
      }
      return;
    }
    case RProcess::Kind::Par:
      firings_par(r->left, r->right, defs, lazy, unfold_budget, out);
      return;
    case RProcess::Kind::Res: {
      std::vector<Firing> inner;
      firings(r->left, defs, lazy, unfold_budget, inner);
      Name bound = r->bound;
      for (auto& f : inner) {
        if (f.label.mentions(bound)) continue;
        auto fire = f.fire;
        out.push_back(
            Firing{f.label, [fire, bound](int id) { return make_rres(fire(id), bound); }});
      }
      return;
    }
  }
}

void firings_par(const RProcessPtr& l, const RProcessPtr& r, const Defs& defs, bool lazy,
                 int unfold_budget, std::vector<Firing>& out) {
  std::vector<Firing> ls, rs;
  firings(l, defs, lazy, unfold_budget, ls);
  firings(r, defs, lazy, unfold_budget, rs);
  for (const auto& f : ls) {
    auto fire = f.fire;
    out.push_back(Firing{f.label, [fire, r](int id) { return make_rpar(fire(id), r); }});
  }
  for (const auto& f : rs) {
    auto fire = f.fire;
    out.push_back(Firing{f.label, [fire, l](int id) { return make_rpar(l, fire(id)); }});
  }
  for (const auto& fl : ls) {
    if (fl.label.is_tau()) continue;
    for (const auto& fr : rs) {
      if (fr.label != fl.label.complement()) continue;
      auto a = fl.fire, b = fr.fire;
      out.push_back(Firing{Label::tau(), [a, b](int id) { return make_rpar(a(id), b(id)); }});
    }
  }
}

}  // namespace

std::vector<RTransition> fwd_transitions(const RProcessPtr& r, const Defs& defs,
                                         RVariant variant, int unfold_budget) {
  std::vector<Firing> fs;
  firings(r, defs, variant == RVariant::Rule, unfold_budget, fs);
  const int fresh = max_event_id(*r) + 1;
  std::vector<RTransition> out;
  for (const auto& f : fs) {
    RProcessPtr target = f.fire(fresh);
    if (variant == RVariant::Congruence) target = rnormalize(target, defs, unfold_budget);
    out.push_back(RTransition{fresh, f.label, std::move(target)});
  }
  std::stable_sort(out.begin(), out.end(), [](const RTransition& a, const RTransition& b) {
    if (a.label != b.label) return a.label < b.label;
    return rprint(a.target) < rprint(b.target);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Backward

namespace {

// Merges a fully forked subtree back into one thread: both sides of every
// parallel composition must carry the same memory below a top Fork, and a
// lifted restriction re-enters the code.
std::optional<std::pair<Memory, ProcessPtr>> collapse(const RProcess& r) {
  switch (r.kind) {
    case RProcess::Kind::Thread:
      return std::make_pair(r.mem, r.code);
    case RProcess::Kind::Par: {
      auto l = collapse(*r.left), rr = collapse(*r.right);
      if (!l || !rr) return std::nullopt;
      if (l->first.empty() || rr->first.empty()) return std::nullopt;
      if (l->first.back().kind != Event::Kind::Fork ||
          rr->first.back().kind != Event::Kind::Fork)
        return std::nullopt;
      Memory ml = l->first, mr = rr->first;
      ml.pop_back();
      mr.pop_back();
      if (ml.size() != mr.size()) return std::nullopt;
      for (size_t i = 0; i < ml.size(); ++i)
        if (!event_equal(ml[i], mr[i])) return std::nullopt;
      return std::make_pair(std::move(ml), make_par(l->second, rr->second));
    }
    case RProcess::Kind::Res: {
      auto b = collapse(*r.left);
      if (!b) return std::nullopt;
      return std::make_pair(b->first, make_res(b->second, r.bound));
    }
  }
  return std::nullopt;
}

void id_counts(const RProcess& r, std::map<int, std::vector<Label>>& counts) {
  switch (r.kind) {
    case RProcess::Kind::Thread:
      for (const auto& e : r.mem)
        if (e.kind == Event::Kind::Act) counts[e.id].push_back(e.label);
      return;
    case RProcess::Kind::Par:
      id_counts(*r.left, counts);
      id_counts(*r.right, counts);
      return;
    case RProcess::Kind::Res:
      id_counts(*r.left, counts);
      return;
  }
}

struct Undo {
  int id;
  Label label;
  RProcessPtr target;
};

std::optional<Undo> pop_thread(const Memory& mem, const ProcessPtr& code) {
  if (mem.empty() || mem.back().kind != Event::Kind::Act) return std::nullopt;
  const Event& e = mem.back();
  Memory m2 = mem;
  m2.pop_back();
  return Undo{e.id, e.label,
              make_thread(std::move(m2), rebuild_sum(e.label, code, e.alternatives, e.slot))};
}

void undos(const RProcessPtr& r, std::vector<Undo>& out) {
  switch (r->kind) {
    case RProcess::Kind::Thread: {
      if (auto u = pop_thread(r->mem, r->code)) out.push_back(std::move(*u));
      return;
    }
    case RProcess::Kind::Par: {
      std::vector<Undo> ls, rs;
      undos(r->left, ls);
      undos(r->right, rs);
      for (const auto& u : ls) out.push_back(Undo{u.id, u.label, make_rpar(u.target, r->right)});
      for (const auto& u : rs) out.push_back(Undo{u.id, u.label, make_rpar(r->left, u.target)});
      // Joint undo of one synchronization held across the two sides.
      for (const auto& ul : ls)
        for (const auto& ur : rs)
          if (ul.id == ur.id && !ul.label.is_tau() && ur.label == ul.label.complement())
            out.push_back(Undo{ul.id, Label::tau(), make_rpar(ul.target, ur.target)});
      // Undo of the event below the fork, after merging the fork back.
      if (auto merged = collapse(*r))
        if (auto u = pop_thread(merged->first, merged->second)) out.push_back(std::move(*u));
      return;
    }
    case RProcess::Kind::Res: {
      std::vector<Undo> inner;
      undos(r->left, inner);
      for (const auto& u : inner) {
        if (u.label.mentions(r->bound)) continue;
        out.push_back(Undo{u.id, u.label, make_rres(u.target, r->bound)});
      }
      return;
    }
  }
}

}  // namespace

std::vector<RTransition> bwd_transitions(const RProcessPtr& r, RVariant variant) {
  (void)variant;  // the undo relation is shared; state shape differs upstream
  std::map<int, std::vector<Label>> counts;
  id_counts(*r, counts);
  std::vector<Undo> us;
  undos(r, us);
  std::vector<RTransition> out;
  for (auto& u : us) {
    // A tau undo is the joint removal of a synchronization pair; a plain
    // undo is valid only for an unsynchronized id.
    if (!u.label.is_tau() && counts[u.id].size() != 1) continue;
    out.push_back(RTransition{u.id, u.label, std::move(u.target)});
  }
  std::stable_sort(out.begin(), out.end(), [](const RTransition& a, const RTransition& b) {
    if (a.id != b.id) return a.id < b.id;
    if (a.label != b.label) return a.label < b.label;
    return rprint(a.target) < rprint(b.target);
  });
  return out;
}

bool coherent(const RProcess& r) {
  std::map<int, std::vector<Label>> counts;
  id_counts(r, counts);
  for (const auto& [id, labels] : counts) {
    if (labels.size() > 2) return false;
    if (labels.size() == 2 && labels[1] != labels[0].complement()) return false;
  }

  // Across every Par, each leaf pair shares a common bottom segment whose
  // top is a Fork.
  std::function<std::vector<const Memory*>(const RProcess&)> leaves =
      [&](const RProcess& s) -> std::vector<const Memory*> {
    switch (s.kind) {
      case RProcess::Kind::Thread:
        return {&s.mem};
      case RProcess::Kind::Par: {
        auto l = leaves(*s.left), rr = leaves(*s.right);
        l.insert(l.end(), rr.begin(), rr.end());
        return l;
      }
      case RProcess::Kind::Res:
        return leaves(*s.left);
    }
    return {};
  };
  std::function<bool(const RProcess&)> walk = [&](const RProcess& s) -> bool {
    switch (s.kind) {
      case RProcess::Kind::Thread:
        return true;
      case RProcess::Kind::Par: {
        for (const Memory* ml : leaves(*s.left))
          for (const Memory* mr : leaves(*s.right)) {
            size_t k = 0;
            while (k < ml->size() && k < mr->size() && event_equal((*ml)[k], (*mr)[k])) ++k;
            if (k == 0 || (*ml)[k - 1].kind != Event::Kind::Fork) return false;
          }
        return walk(*s.left) && walk(*s.right);
      }
      case RProcess::Kind::Res:
        return walk(*s.left);
    }
    return true;
  };
  return walk(r);
}

// ---------------------------------------------------------------------------
// Experiments

LoopReport loop_check(const ProcessPtr& p, const Defs& defs, int depth, int trials,
                      std::uint64_t seed, int unfold_budget) {
  LoopReport rep;
  std::mt19937_64 rng(seed);
  const std::string root = pretty(*p);
  for (int trial = 0; trial < trials; ++trial) {
    ++rep.trials;
    RProcessPtr state = rnormalize(lift(p), defs, unfold_budget);
    std::vector<std::string> trace{rprint(state)};
    for (int step = 0; step < depth; ++step) {
      auto fwd = fwd_transitions(state, defs, RVariant::Congruence, unfold_budget);
      if (fwd.empty()) break;
      const RTransition& t = fwd[rng() % fwd.size()];
      ++rep.steps;
      trace.push_back("fwd #" + std::to_string(t.id) + " " + t.label.str() + " -> " +
                      rprint(t.target));
      if (!coherent(*t.target)) {
        rep.failures.push_back({root, trace, "incoherent memory after forward step"});
        break;
      }
      const std::string before = rkey(state, defs, unfold_budget, RVariant::Congruence);
      bool undone = false;
      for (const auto& b : bwd_transitions(t.target, RVariant::Congruence)) {
        if (b.id != t.id || b.label != t.label) continue;
        undone = true;
        RProcessPtr back = rnormalize(b.target, defs, unfold_budget);
        if (rkey(back, defs, unfold_budget, RVariant::Congruence) != before) {
          rep.failures.push_back(
              {root, trace, "undo of #" + std::to_string(t.id) + " did not restore the state"});
          undone = false;
        }
        break;
      }
      if (!undone && rep.failures.empty() == false &&
          rep.failures.back().trace == trace) {
        break;  // already recorded
      }
      if (!undone) {
        rep.failures.push_back(
            {root, trace, "no backward step with id " + std::to_string(t.id)});
        break;
      }
      state = t.target;
    }
  }
  return rep;
}

Lts rccs_lts(const ProcessPtr& p, const Defs& defs, RVariant variant, int max_states,
             int unfold_budget) {
  Lts out;
  RProcessPtr root =
      variant == RVariant::Congruence ? rnormalize(lift(p), defs, unfold_budget) : lift(p);
  auto key = [&](const RProcessPtr& r) { return rkey(r, defs, unfold_budget, variant); };

  std::map<std::string, RProcessPtr> seen;
  std::set<LtsEdge> edges;
  std::deque<std::string> queue;
  out.root = key(root);
  seen.emplace(out.root, root);
  queue.push_back(out.root);

  while (!queue.empty()) {
    std::string k = queue.front();
    queue.pop_front();
    RProcessPtr state = seen.at(k);
    auto push = [&](const std::string& label, const RProcessPtr& target) {
      std::string dk = key(target);
      if (!seen.count(dk)) {
        if (static_cast<int>(seen.size()) >= max_states) {
          out.truncated = true;
          return;
        }
        seen.emplace(dk, target);
        queue.push_back(dk);
      }
      edges.insert(LtsEdge{k, label, "", dk});
    };
    for (const auto& t : fwd_transitions(state, defs, variant, unfold_budget))
      push("fwd:" + t.label.str(), t.target);
    for (const auto& t : bwd_transitions(state, variant))
      push("bwd:" + t.label.str(), t.target);
  }

  for (const auto& [k, v] : seen) out.states.push_back(k);
  for (const auto& e : edges)
    if (seen.count(e.dst)) out.edges.push_back(e);
  return out;
}

VariantOutcome compare_variants(const ProcessPtr& p, const Defs& defs, int max_states,
                                int unfold_budget) {
  VariantOutcome out;
  Lts cong = rccs_lts(p, defs, RVariant::Congruence, max_states, unfold_budget);
  Lts rule = rccs_lts(p, defs, RVariant::Rule, max_states, unfold_budget);
  if (cong.truncated || rule.truncated) {
    out.kind = VariantOutcome::Kind::Truncated;
    return out;
  }
  out.detail = bisim(cong, rule);
  out.kind = out.detail.bisimilar ? VariantOutcome::Kind::Bisimilar
                                  : VariantOutcome::Kind::Distinguished;
  return out;
}

}  // namespace ccsw
