#include "ccsw/congruence.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "ccsw/binding.hpp"
#include "ccsw/print.hpp"

namespace ccsw {

const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::ParComm: return "par-comm";
    case Axiom::ParAssoc: return "par-assoc";
    case Axiom::ParUnit: return "par-unit";
    case Axiom::SumComm: return "sum-comm";
    case Axiom::SumAssoc: return "sum-assoc";
    case Axiom::SumUnit: return "sum-unit";
    case Axiom::ScopeExt: return "scope-ext";
    case Axiom::ResSwap: return "res-swap";
    case Axiom::RecUnfold: return "rec-unfold";
    case Axiom::Alpha: return "alpha";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Canonicalization

// Per-branch constant unfolding: every Const on a path is expanded at most
// `budget` times.
ProcessPtr unfold(const ProcessPtr& p, const Defs& defs, int budget) {
  if (budget <= 0) return p;
  switch (p->op) {
    case Op::Nil:
      return p;
    case Op::Const: {
      const Process* body = defs.find(p->constant);
      if (!body) throw UndefinedConstant(p->constant);
      return unfold(std::make_shared<Process>(*body), defs, budget - 1);
    }
    case Op::Prefix:
      return make_prefix(p->label, unfold(p->kids[0], defs, budget), p->key);
    case Op::Sum: {
      std::vector<ProcessPtr> kids;
      for (const auto& k : p->kids) kids.push_back(unfold(k, defs, budget));
      return make_sum(std::move(kids));
    }
    case Op::Par:
      return make_par(unfold(p->kids[0], defs, budget), unfold(p->kids[1], defs, budget));
    case Op::Restrict:
      return make_res(unfold(p->kids[0], defs, budget), p->bound);
    case Op::Relabel:
      return make_rel(unfold(p->kids[0], defs, budget), p->renames);
  }
  return p;
}

struct CanonCtx {
  const Defs* defs;
  std::set<Name> avoid;  // temporaries must not collide with anything in the input
  int next_temp = 0;
  std::map<const Process*, std::string> key_cache;

  Name gensym() {
    for (;;) {
      Name cand{"t" + std::to_string(next_temp++)};
      if (!avoid.count(cand)) {
        avoid.insert(cand);
        return cand;
      }
    }
  }

  const std::string& key_of(const ProcessPtr& p) {
    auto it = key_cache.find(p.get());
    if (it != key_cache.end()) return it->second;
    return key_cache.emplace(p.get(), alpha_key(*p, defs)).first->second;
  }
};

ProcessPtr canon0(const ProcessPtr& p, CanonCtx& ctx);

// Wraps `core` in the restriction block, picking the block order whose
// alpha-canonical rendering is least. All orders are res-swap equivalent.
ProcessPtr finish_chain(std::vector<Name> binders, ProcessPtr core, CanonCtx& ctx) {
  if (binders.empty()) return core;
  auto build = [&](const std::vector<Name>& order) {
    ProcessPtr m = core;
    for (auto it = order.rbegin(); it != order.rend(); ++it) m = make_res(m, *it);
    return m;
  };
  if (binders.size() > 6) return build(binders);  // permutation cap; order kept as collected
  std::vector<size_t> idx(binders.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  ProcessPtr best;
  std::string best_key;
  do {
    std::vector<Name> order;
    for (size_t i : idx) order.push_back(binders[i]);
    ProcessPtr cand = build(order);
    std::string key = alpha_key(*cand, ctx.defs);
    if (!best || key < best_key) {
      best = cand;
      best_key = std::move(key);
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

// Splits a canonical term into its top restriction block and core.
std::pair<std::vector<Name>, ProcessPtr> split_chain(ProcessPtr m) {
  std::vector<Name> chain;
  while (m->op == Op::Restrict) {
    chain.push_back(m->bound);
    m = m->kids[0];
  }
  return {std::move(chain), std::move(m)};
}

// Appends `m` to the component list, flattening parallel compositions and
// dropping units.
void collect_par(const ProcessPtr& m, std::vector<ProcessPtr>& comps) {
  if (m->op == Op::Nil) return;
  if (m->op == Op::Par) {
    collect_par(m->kids[0], comps);
    collect_par(m->kids[1], comps);
    return;
  }
  comps.push_back(m);
}

// Extrudes what it can off the top restriction chain of `m`, appending the
// extruded binder names to `binders`. A binder that is not pinned by a
// constant is alpha-renamed to a fresh temporary, so its extrusion is
// always permitted; a pinned one moves only if its name is not free in the
// rest of the group. Returns the remaining component.
ProcessPtr strip_binders(ProcessPtr m, const std::set<Name>& others_fn,
                         std::vector<Name>& binders, CanonCtx& ctx) {
  std::vector<Name> blocked;
  while (m->op == Op::Restrict) {
    Name b = m->bound;
    ProcessPtr body = m->kids[0];
    if (!binder_rigid(*body, b, ctx.defs)) {
      Name t = ctx.gensym();
      binders.push_back(t);
      m = apply_relabeling(*body, {Renaming{b, t}}, ctx.defs);
    } else if (!others_fn.count(b)) {
      binders.push_back(b);
      m = body;
    } else {
      blocked.push_back(b);  // res-swap past it and keep going
      m = body;
    }
  }
  for (auto it = blocked.rbegin(); it != blocked.rend(); ++it) m = make_res(m, *it);
  return m;
}

ProcessPtr canon_par(const ProcessPtr& left, const ProcessPtr& right, CanonCtx& ctx) {
  std::vector<ProcessPtr> comps;
  collect_par(left, comps);
  collect_par(right, comps);

  std::vector<Name> binders;
  bool changed = true;
  while (changed) {
    changed = false;
    std::stable_sort(comps.begin(), comps.end(), [&](const ProcessPtr& a, const ProcessPtr& b) {
      return ctx.key_of(a) < ctx.key_of(b);
    });
    for (size_t i = 0; i < comps.size(); ++i) {
      if (comps[i]->op != Op::Restrict) continue;
      std::set<Name> others_fn;
      for (size_t j = 0; j < comps.size(); ++j) {
        if (j == i) continue;
        auto f = free_names(*comps[j], ctx.defs);
        others_fn.insert(f.begin(), f.end());
      }
      size_t before = binders.size();
      ProcessPtr core = strip_binders(comps[i], others_fn, binders, ctx);
      if (binders.size() == before) continue;
      comps.erase(comps.begin() + static_cast<long>(i));
      collect_par(core, comps);
      changed = true;
      break;
    }
  }

  std::stable_sort(comps.begin(), comps.end(), [&](const ProcessPtr& a, const ProcessPtr& b) {
    return ctx.key_of(a) < ctx.key_of(b);
  });

  ProcessPtr core;
  if (comps.empty()) {
    core = make_nil();
  } else {
    core = comps.back();
    for (size_t i = comps.size() - 1; i-- > 0;) core = make_par(comps[i], core);
  }
  return finish_chain(std::move(binders), std::move(core), ctx);
}

ProcessPtr canon0(const ProcessPtr& p, CanonCtx& ctx) {
  switch (p->op) {
    case Op::Nil:
    case Op::Const:
      return p;
    case Op::Prefix:
      return make_prefix(p->label, canon0(p->kids[0], ctx), p->key);
    case Op::Relabel:
      return make_rel(canon0(p->kids[0], ctx), p->renames);
    case Op::Sum: {
      std::vector<ProcessPtr> kids;
      for (const auto& k : p->kids) {
        ProcessPtr c = canon0(k, ctx);
        if (c->op == Op::Nil) continue;  // sum-unit
        if (c->op == Op::Sum)
          kids.insert(kids.end(), c->kids.begin(), c->kids.end());  // sum-assoc
        else
          kids.push_back(std::move(c));
      }
      std::stable_sort(kids.begin(), kids.end(), [&](const ProcessPtr& a, const ProcessPtr& b) {
        return ctx.key_of(a) < ctx.key_of(b);
      });
      return make_sum(std::move(kids));
    }
    case Op::Par:
      return canon_par(canon0(p->kids[0], ctx), canon0(p->kids[1], ctx), ctx);
    case Op::Restrict: {
      ProcessPtr body = canon0(p->kids[0], ctx);
      auto [chain, core] = split_chain(std::move(body));
      chain.insert(chain.begin(), p->bound);
      return finish_chain(std::move(chain), std::move(core), ctx);
    }
  }
  return p;
}

CanonicalForm finish_canonical(ProcessPtr shaped, const Defs& defs) {
  ProcessPtr named = alpha_canon(*shaped, &defs);
  CanonicalForm cf;
  auto [chain, core] = split_chain(named);
  cf.prenex = std::move(chain);
  cf.proc = std::move(named);
  cf.key = pretty(*cf.proc);
  return cf;
}

bool has_const(const Process& p) {
  if (p.op == Op::Const) return true;
  for (const auto& k : p.kids)
    if (has_const(*k)) return true;
  return false;
}

}  // namespace

CanonicalForm canonicalize(const ProcessPtr& p, const Defs& defs, int unfold_budget) {
  ProcessPtr u = unfold(p, defs, unfold_budget);
  CanonCtx ctx;
  ctx.defs = &defs;
  // Temporaries must dodge every visible name, including the free names an
  // opaque constant may contribute.
  ctx.avoid = all_names(*u);
  auto fns = free_names(*u, &defs);
  ctx.avoid.insert(fns.begin(), fns.end());
  return finish_canonical(canon0(u, ctx), defs);
}

bool equiv(const ProcessPtr& p, const ProcessPtr& q, const Defs& defs, int unfold_budget,
           ContextMode mode) {
  if (mode == ContextMode::Top)
    return brute_equiv(p, q, defs, 10000, mode) == BruteVerdict::True;
  if (!has_const(*p) && !has_const(*q))
    return canonicalize(p, defs, 0).key == canonicalize(q, defs, 0).key;
  // Uniform unfolding depths may differ on the two sides; any match decides.
  std::set<std::string> left;
  for (int i = 0; i <= unfold_budget; ++i) left.insert(canonicalize(p, defs, i).key);
  for (int j = 0; j <= unfold_budget; ++j)
    if (left.count(canonicalize(q, defs, j).key)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Axiom-step neighbors and the closure oracle

namespace {

struct Rewrite {
  Axiom axiom;
  ProcessPtr replacement;
};

void local_rewrites(const ProcessPtr& s, const Defs& defs, std::vector<Rewrite>& out) {
  switch (s->op) {
    case Op::Par: {
      const ProcessPtr &a = s->kids[0], &b = s->kids[1];
      out.push_back({Axiom::ParComm, make_par(b, a)});
      if (a->op == Op::Par)
        out.push_back({Axiom::ParAssoc, make_par(a->kids[0], make_par(a->kids[1], b))});
      if (b->op == Op::Par)
        out.push_back({Axiom::ParAssoc, make_par(make_par(a, b->kids[0]), b->kids[1])});
      if (b->op == Op::Nil) out.push_back({Axiom::ParUnit, a});
      if (a->op == Op::Nil) out.push_back({Axiom::ParUnit, b});
      if (a->op == Op::Restrict && !free_names(*b, &defs).count(a->bound))
        out.push_back({Axiom::ScopeExt, make_res(make_par(a->kids[0], b), a->bound)});
      break;
    }
    case Op::Sum: {
      const auto& kids = s->kids;
      for (size_t i = 0; i + 1 < kids.size(); ++i) {
        auto swapped = kids;
        std::swap(swapped[i], swapped[i + 1]);
        out.push_back({Axiom::SumComm, make_sum(std::move(swapped))});
      }
      for (size_t i = 0; i < kids.size(); ++i) {
        if (kids[i]->op == Op::Sum) {
          std::vector<ProcessPtr> spliced;
          for (size_t j = 0; j < kids.size(); ++j) {
            if (j == i)
              spliced.insert(spliced.end(), kids[i]->kids.begin(), kids[i]->kids.end());
            else
              spliced.push_back(kids[j]);
          }
          out.push_back({Axiom::SumAssoc, make_sum(std::move(spliced))});
        }
        if (kids[i]->op == Op::Nil) {
          auto dropped = kids;
          dropped.erase(dropped.begin() + static_cast<long>(i));
          out.push_back({Axiom::SumUnit, make_sum(std::move(dropped))});
        }
      }
      if (kids.size() >= 3) {
        for (size_t i = 0; i + 1 < kids.size(); ++i) {
          std::vector<ProcessPtr> grouped;
          for (size_t j = 0; j < kids.size(); ++j) {
            if (j == i) {
              grouped.push_back(make_sum({kids[i], kids[i + 1]}));
              ++j;
            } else {
              grouped.push_back(kids[j]);
            }
          }
          out.push_back({Axiom::SumAssoc, make_sum(std::move(grouped))});
        }
      }
      break;
    }
    case Op::Restrict: {
      const ProcessPtr& body = s->kids[0];
      if (body->op == Op::Restrict)
        out.push_back(
            {Axiom::ResSwap, make_res(make_res(body->kids[0], s->bound), body->bound)});
      if (body->op == Op::Par && !free_names(*body->kids[1], &defs).count(s->bound))
        out.push_back(
            {Axiom::ScopeExt, make_par(make_res(body->kids[0], s->bound), body->kids[1])});
      break;
    }
    case Op::Const: {
      const Process* body = defs.find(s->constant);
      if (!body) throw UndefinedConstant(s->constant);
      out.push_back({Axiom::RecUnfold, std::make_shared<Process>(*body)});
      break;
    }
    default:
      break;
  }
  // Unit introductions and constant folding apply to any subterm.
  out.push_back({Axiom::ParUnit, make_par(s, make_nil())});
  if (s->op == Op::Sum) {
    auto padded = s->kids;
    padded.push_back(make_nil());
    out.push_back({Axiom::SumUnit, make_sum(std::move(padded))});
  } else {
    out.push_back({Axiom::SumUnit, make_sum({s, make_nil()})});
  }
  for (const auto& [id, body] : defs.map)
    if (equal(*s, *body)) out.push_back({Axiom::RecUnfold, make_const(id)});
}

ProcessPtr replace_at(const ProcessPtr& root, const std::vector<size_t>& path, size_t depth,
                      const ProcessPtr& replacement) {
  if (depth == path.size()) return replacement;
  auto node = std::make_shared<Process>(*root);
  node->kids[path[depth]] = replace_at(root->kids[path[depth]], path, depth + 1, replacement);
  return node;
}

std::string path_str(const std::vector<size_t>& path) {
  std::string s;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) s += '/';
    s += std::to_string(path[i]);
  }
  return s;
}

void neighbors_walk(const ProcessPtr& root, const ProcessPtr& node, std::vector<size_t>& path,
                    const Defs& defs, ContextMode mode,
                    std::vector<std::pair<ProcessPtr, TraceStep>>& out) {
  std::vector<Rewrite> rws;
  local_rewrites(node, defs, rws);
  for (const auto& rw : rws) {
    ProcessPtr next = path.empty() ? rw.replacement : replace_at(root, path, 0, rw.replacement);
    TraceStep step{rw.axiom, path_str(path), pretty(*root), ""};
    ProcessPtr rep = alpha_canon(*next, &defs);
    step.after = pretty(*rep);
    out.emplace_back(std::move(rep), std::move(step));
  }
  if (mode == ContextMode::Top) return;
  for (size_t i = 0; i < node->kids.size(); ++i) {
    path.push_back(i);
    neighbors_walk(root, node->kids[i], path, defs, mode, out);
    path.pop_back();
  }
}

}  // namespace

std::vector<std::pair<ProcessPtr, TraceStep>> congruence_neighbors(const ProcessPtr& p,
                                                                   const Defs& defs,
                                                                   ContextMode mode) {
  std::vector<std::pair<ProcessPtr, TraceStep>> out;
  std::vector<size_t> path;
  neighbors_walk(p, p, path, defs, mode, out);
  return out;
}

BruteVerdict brute_equiv(const ProcessPtr& p, const ProcessPtr& q, const Defs& defs,
                         int step_budget, ContextMode mode, std::vector<TraceStep>* trace) {
  const std::string target = alpha_key(*q, &defs);
  ProcessPtr start = alpha_canon(*p, &defs);
  const std::string start_key = pretty(*start);
  if (start_key == target) {
    if (trace) trace->clear();
    return BruteVerdict::True;
  }
  struct Parent {
    std::string from;
    TraceStep step;
  };
  std::map<std::string, Parent> parents;
  std::deque<std::pair<std::string, ProcessPtr>> queue;
  std::set<std::string> seen{start_key};
  queue.emplace_back(start_key, start);

  auto unwind = [&](const std::string& found) {
    if (!trace) return;
    trace->clear();
    std::string at = found;
    while (at != start_key) {
      auto& par = parents.at(at);
      trace->push_back(par.step);
      at = par.from;
    }
    std::reverse(trace->begin(), trace->end());
  };

  int expanded = 0;
  while (!queue.empty()) {
    if (expanded++ >= step_budget) return BruteVerdict::Exhausted;
    auto [key, term] = queue.front();
    queue.pop_front();
    for (auto& [rep, step] : congruence_neighbors(term, defs, mode)) {
      std::string nkey = pretty(*rep);
      if (!seen.insert(nkey).second) continue;
      parents.emplace(nkey, Parent{key, step});
      if (nkey == target) {
        unwind(nkey);
        return BruteVerdict::True;
      }
      queue.emplace_back(std::move(nkey), std::move(rep));
    }
  }
  return BruteVerdict::False;
}

std::vector<std::pair<ProcessPtr, std::vector<TraceStep>>> congruence_witnesses(
    const ProcessPtr& p, const Defs& defs, int depth, ContextMode mode) {
  ProcessPtr start = alpha_canon(*p, &defs);
  std::vector<std::pair<ProcessPtr, std::vector<TraceStep>>> out;
  std::map<std::string, size_t> index;
  out.emplace_back(start, std::vector<TraceStep>{});
  index[pretty(*start)] = 0;
  size_t ring_begin = 0;
  for (int d = 0; d < depth; ++d) {
    size_t ring_end = out.size();
    for (size_t i = ring_begin; i < ring_end; ++i) {
      auto base_term = out[i].first;
      auto base_trace = out[i].second;
      for (auto& [rep, step] : congruence_neighbors(base_term, defs, mode)) {
        std::string key = pretty(*rep);
        if (index.count(key)) continue;
        index[key] = out.size();
        auto tr = base_trace;
        tr.push_back(step);
        out.emplace_back(std::move(rep), std::move(tr));
      }
    }
    ring_begin = ring_end;
  }
  return out;
}

std::optional<std::vector<TraceStep>> equiv_witness(const ProcessPtr& p, const ProcessPtr& q,
                                                    const Defs& defs, int step_budget) {
  std::vector<TraceStep> trace;
  if (brute_equiv(p, q, defs, step_budget, ContextMode::All, &trace) == BruteVerdict::True)
    return trace;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// SPEC transitions

namespace {

struct SpecInner {
  Label label;
  ProcessPtr target;  // canonical
  Transition inner;   // structural derivation over a rotation of the representative
};

ProcessPtr par_chain(const std::vector<ProcessPtr>& comps) {
  ProcessPtr m = comps.back();
  for (size_t i = comps.size() - 1; i-- > 0;) m = make_par(comps[i], m);
  return m;
}

// com2-chain lifting `premise` (a transition of the last chain element)
// through the leading components.
Transition com2_lift(const std::vector<ProcessPtr>& leading, Transition premise) {
  Transition t = std::move(premise);
  for (size_t i = leading.size(); i-- > 0;) {
    ProcessPtr source = make_par(leading[i], t.source);
    ProcessPtr target = make_par(leading[i], t.target);
    t = Transition{std::move(source), t.label, std::move(target), Rule::Com2, {std::move(t)}};
  }
  return t;
}

std::vector<SpecInner> spec_inner(const ProcessPtr& canon_rep, const Defs& defs, int budget,
                                  bool keep_rel, SpecMemo& memo);

// Transitions of the canonical representative, con-wrapped at the
// representative itself, memoized by canonical key.
const std::vector<Transition>& rep_steps(const CanonicalForm& cf, const Defs& defs, int budget,
                                         bool keep_rel, SpecMemo& memo) {
  if (auto it = memo.steps.find(cf.key); it != memo.steps.end()) return it->second;
  static const std::vector<Transition> empty;
  if (!memo.in_flight.insert(cf.key).second) return empty;  // unguarded cycle
  std::vector<Transition> ts;
  std::set<std::string> dedup;
  for (auto& si : spec_inner(cf.proc, defs, budget, keep_rel, memo)) {
    std::string sig = si.label.str() + "\x1f" + pretty(*si.target);
    if (!dedup.insert(sig).second) continue;
    ts.push_back(Transition{cf.proc, si.label, si.target, Rule::Con, {std::move(si.inner)}});
  }
  std::sort(ts.begin(), ts.end(), [](const Transition& a, const Transition& b) {
    return a.label.str() + "\x1f" + pretty(*a.target) <
           b.label.str() + "\x1f" + pretty(*b.target);
  });
  memo.in_flight.erase(cf.key);
  return memo.steps.emplace(cf.key, std::move(ts)).first->second;
}

// Full spec transitions of `term`, each a con-rooted derivation.
std::vector<Transition> spec_of(const ProcessPtr& term, const Defs& defs, int budget,
                                bool keep_rel, SpecMemo& memo) {
  CanonicalForm cf = canonicalize(term, defs, budget);
  std::vector<Transition> out;
  for (const auto& t : rep_steps(cf, defs, budget, keep_rel, memo))
    out.push_back(Transition{term, t.label, t.target, Rule::Con, {t.premises[0]}});
  return out;
}

std::vector<SpecInner> spec_inner(const ProcessPtr& canon_rep, const Defs& defs, int budget,
                                  bool keep_rel, SpecMemo& memo) {
  std::vector<SpecInner> out;
  const ProcessPtr& r = canon_rep;
  switch (r->op) {
    case Op::Nil:
    case Op::Const:  // opaque at this unfolding budget; con has nothing to feed on
      break;
    case Op::Prefix: {
      if (r->key) throw std::invalid_argument("spec_transitions requires a key-free term");
      out.push_back(SpecInner{r->label, canonicalize(r->kids[0], defs, budget).proc,
                              Transition{r, r->label, r->kids[0], Rule::Act, {}}});
      break;
    }
    case Op::Sum: {
      for (const auto& kid : r->kids)
        for (auto& t : spec_of(kid, defs, budget, keep_rel, memo))
          out.push_back(
              SpecInner{t.label, t.target, Transition{r, t.label, t.target, Rule::Sum, {t}}});
      break;
    }
    case Op::Par: {
      std::vector<ProcessPtr> comps;
      collect_par(r, comps);
      std::vector<std::vector<Transition>> steps(comps.size());
      for (size_t i = 0; i < comps.size(); ++i)
        steps[i] = spec_of(comps[i], defs, budget, keep_rel, memo);
      for (size_t i = 0; i < comps.size(); ++i) {
        std::vector<ProcessPtr> leading;
        for (size_t j = 0; j < comps.size(); ++j)
          if (j != i) leading.push_back(comps[j]);
        for (const auto& t : steps[i]) {
          Transition lifted = com2_lift(leading, t);
          std::vector<ProcessPtr> target_comps = leading;
          target_comps.push_back(t.target);
          out.push_back(SpecInner{t.label, canonicalize(par_chain(target_comps), defs, 0).proc,
                                  std::move(lifted)});
        }
      }
      for (size_t i = 0; i < comps.size(); ++i) {
        for (size_t j = i + 1; j < comps.size(); ++j) {
          std::vector<ProcessPtr> leading;
          for (size_t k = 0; k < comps.size(); ++k)
            if (k != i && k != j) leading.push_back(comps[k]);
          for (const auto& ti : steps[i]) {
            if (ti.label.is_tau()) continue;
            for (const auto& tj : steps[j]) {
              if (tj.label != ti.label.complement()) continue;
              Transition syn{make_par(comps[i], comps[j]), Label::tau(),
                             make_par(ti.target, tj.target), Rule::Syn, {ti, tj}};
              Transition lifted = leading.empty() ? std::move(syn)
                                                  : com2_lift(leading, std::move(syn));
              std::vector<ProcessPtr> target_comps = leading;
              target_comps.push_back(make_par(ti.target, tj.target));
              out.push_back(SpecInner{Label::tau(),
                                      canonicalize(par_chain(target_comps), defs, 0).proc,
                                      std::move(lifted)});
            }
          }
        }
      }
      break;
    }
    case Op::Restrict: {
      auto [chain, core] = split_chain(r);
      for (auto& t : spec_of(core, defs, budget, keep_rel, memo)) {
        bool blocked = false;
        for (const auto& b : chain)
          if (t.label.mentions(b)) blocked = true;
        if (blocked) continue;
        Transition wrapped = t;
        ProcessPtr src = core, tgt = t.target;
        for (size_t i = chain.size(); i-- > 0;) {
          src = make_res(src, chain[i]);
          tgt = make_res(tgt, chain[i]);
          wrapped = Transition{src, t.label, tgt, Rule::Res, {std::move(wrapped)}};
        }
        out.push_back(SpecInner{t.label, canonicalize(tgt, defs, 0).proc, std::move(wrapped)});
      }
      break;
    }
    case Op::Relabel: {
      if (!keep_rel) break;
      for (auto& t : spec_of(r->kids[0], defs, budget, keep_rel, memo)) {
        Label mapped = apply_to_label(t.label, r->renames);
        ProcessPtr raw = make_rel(t.target, r->renames);
        out.push_back(SpecInner{mapped, canonicalize(raw, defs, 0).proc,
                                Transition{r, mapped, raw, Rule::Rel, {std::move(t)}}});
      }
      break;
    }
  }
  return out;
}

}  // namespace

StepResult spec_transitions(const ProcessPtr& p, const Defs& defs, int unfold_budget,
                            bool keep_rel, SpecMemo* memo) {
  if (!is_std(*p)) throw std::invalid_argument("spec_transitions requires a key-free term");
  SpecMemo local;
  SpecMemo& m = memo ? *memo : local;
  StepResult res;
  res.transitions = spec_of(p, defs, unfold_budget, keep_rel, m);
  return res;
}

// ---------------------------------------------------------------------------
// Derivation checking (lives here because `con` needs the congruence)

bool check_derivation(const Transition& t, const Defs& defs, int equiv_budget) {
  auto all_premises_ok = [&]() {
    for (const auto& p : t.premises)
      if (!check_derivation(p, defs, equiv_budget)) return false;
    return true;
  };
  switch (t.rule) {
    case Rule::Act:
      return t.premises.empty() && t.source->op == Op::Prefix && !t.source->key &&
             t.source->label == t.label && equal(t.source->kids[0], t.target);
    case Rule::Sum: {
      if (t.premises.size() != 1 || t.source->op != Op::Sum) return false;
      const Transition& p = t.premises[0];
      bool is_kid = false;
      for (const auto& k : t.source->kids)
        if (equal(*k, *p.source)) is_kid = true;
      return is_kid && t.label == p.label && equal(*t.target, *p.target) && all_premises_ok();
    }
    case Rule::Com1: {
      if (t.premises.size() != 1 || t.source->op != Op::Par || t.target->op != Op::Par)
        return false;
      const Transition& p = t.premises[0];
      return equal(*p.source, *t.source->kids[0]) && t.label == p.label &&
             equal(*t.target->kids[0], *p.target) &&
             equal(*t.target->kids[1], *t.source->kids[1]) && all_premises_ok();
    }
    case Rule::Com2: {
      if (t.premises.size() != 1 || t.source->op != Op::Par || t.target->op != Op::Par)
        return false;
      const Transition& p = t.premises[0];
      return equal(*p.source, *t.source->kids[1]) && t.label == p.label &&
             equal(*t.target->kids[1], *p.target) &&
             equal(*t.target->kids[0], *t.source->kids[0]) && all_premises_ok();
    }
    case Rule::Syn: {
      if (t.premises.size() != 2 || t.source->op != Op::Par || t.target->op != Op::Par)
        return false;
      const Transition& pl = t.premises[0];
      const Transition& pr = t.premises[1];
      return !pl.label.is_tau() && pr.label == pl.label.complement() && t.label.is_tau() &&
             equal(*pl.source, *t.source->kids[0]) && equal(*pr.source, *t.source->kids[1]) &&
             equal(*t.target->kids[0], *pl.target) && equal(*t.target->kids[1], *pr.target) &&
             all_premises_ok();
    }
    case Rule::Res: {
      if (t.premises.size() != 1 || t.source->op != Op::Restrict ||
          t.target->op != Op::Restrict)
        return false;
      const Transition& p = t.premises[0];
      return equal(*p.source, *t.source->kids[0]) && !p.label.mentions(t.source->bound) &&
             t.label == p.label && t.target->bound == t.source->bound &&
             equal(*t.target->kids[0], *p.target) && all_premises_ok();
    }
    case Rule::Rel: {
      if (t.premises.size() != 1 || t.source->op != Op::Relabel ||
          t.target->op != Op::Relabel)
        return false;
      const Transition& p = t.premises[0];
      return equal(*p.source, *t.source->kids[0]) &&
             t.label == apply_to_label(p.label, t.source->renames) &&
             t.target->renames == t.source->renames &&
             equal(*t.target->kids[0], *p.target) && all_premises_ok();
    }
    case Rule::Rec: {
      if (t.premises.size() != 1 || t.source->op != Op::Const) return false;
      const Process* body = defs.find(t.source->constant);
      if (!body) return false;
      const Transition& p = t.premises[0];
      return equal(*p.source, *body) && t.label == p.label && equal(*t.target, *p.target) &&
             all_premises_ok();
    }
    case Rule::Con: {
      if (t.premises.size() != 1) return false;
      const Transition& p = t.premises[0];
      return t.label == p.label && equiv(t.source, p.source, defs, equiv_budget) &&
             equiv(t.target, p.target, defs, equiv_budget) && all_premises_ok();
    }
  }
  return false;
}

}  // namespace ccsw
