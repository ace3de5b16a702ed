#include "ccsw/binding.hpp"

#include <map>

#include "ccsw/print.hpp"

namespace ccsw {

namespace {

// Least fixpoint of free names over the definition map, restricted to the
// constants reachable from a starting set.
std::map<std::string, std::set<Name>> const_fn_lfp(const std::set<std::string>& roots,
                                                   const Defs& defs);

std::set<Name> fn(const Process& p, const Defs* defs,
                  const std::map<std::string, std::set<Name>>* lfp) {
  switch (p.op) {
    case Op::Nil:
      return {};
    case Op::Prefix: {
      auto s = fn(*p.kids[0], defs, lfp);
      if (!p.label.is_tau()) s.insert(p.label.name);
      return s;
    }
    case Op::Sum:
    case Op::Par: {
      std::set<Name> s;
      for (const auto& k : p.kids) {
        auto sub = fn(*k, defs, lfp);
        s.insert(sub.begin(), sub.end());
      }
      return s;
    }
    case Op::Restrict: {
      auto s = fn(*p.kids[0], defs, lfp);
      s.erase(p.bound);
      return s;
    }
    case Op::Relabel: {
      std::set<Name> s;
      for (const auto& n : fn(*p.kids[0], defs, lfp)) {
        Name m = n;
        for (const auto& r : p.renames)
          if (r.from == n) {
            m = r.to;
            break;
          }
        s.insert(m);
      }
      return s;
    }
    case Op::Const:
      if (lfp) {
        auto it = lfp->find(p.constant);
        if (it != lfp->end()) return it->second;
      }
      return {};
  }
  return {};
}

std::map<std::string, std::set<Name>> const_fn_lfp(const std::set<std::string>& roots,
                                                   const Defs& defs) {
  std::map<std::string, std::set<Name>> est;
  std::set<std::string> reach = roots, todo = roots;
  while (!todo.empty()) {
    std::string id = *todo.begin();
    todo.erase(todo.begin());
    const Process* body = defs.find(id);
    if (!body) throw UndefinedConstant(id);
    for (const auto& c : constants_of(*body))
      if (reach.insert(c).second) todo.insert(c);
  }
  for (const auto& id : reach) est[id] = {};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& id : reach) {
      auto next = fn(*defs.find(id), &defs, &est);
      if (next != est[id]) {
        est[id] = std::move(next);
        changed = true;
      }
    }
  }
  return est;
}

std::map<std::string, std::set<Name>> lfp_for(const Process& p, const Defs* defs) {
  if (!defs) return {};
  auto roots = constants_of(p);
  if (roots.empty()) return {};
  return const_fn_lfp(roots, *defs);
}

bool has_const(const Process& p) {
  if (p.op == Op::Const) return true;
  for (const auto& k : p.kids)
    if (has_const(*k)) return true;
  return false;
}

// True iff renaming the binder of `x` over `body` would have to rewrite an
// occurrence hidden inside a constant (which is impossible).
bool const_blocks(const Process& body, const Name& x, const Defs* defs,
                  const std::map<std::string, std::set<Name>>& lfp) {
  if (body.op == Op::Const) {
    if (!defs) return true;
    auto it = lfp.find(body.constant);
    return it != lfp.end() && it->second.count(x) > 0;
  }
  for (const auto& k : body.kids)
    if (const_blocks(*k, x, defs, lfp)) return true;
  return false;
}

void collect_frozen(const Process& p, const Defs* defs,
                    const std::map<std::string, std::set<Name>>& lfp, std::set<Name>& out) {
  if (p.op == Op::Restrict && const_blocks(*p.kids[0], p.bound, defs, lfp))
    out.insert(p.bound);
  for (const auto& k : p.kids) collect_frozen(*k, defs, lfp, out);
}

void collect_relabel_lhs(const Process& p, std::set<Name>& out) {
  if (p.op == Op::Relabel)
    for (const auto& r : p.renames) out.insert(r.from);
  for (const auto& k : p.kids) collect_relabel_lhs(*k, out);
}

using Env = std::map<Name, Name>;

Name apply_env(const Env& env, const Name& n) {
  auto it = env.find(n);
  return it == env.end() ? n : it->second;
}

Label apply_env_label(const Env& env, const Label& l) {
  if (l.is_tau()) return l;
  Label out = l;
  out.name = apply_env(env, l.name);
  return out;
}

// Shared state for the renaming passes.
struct RenameCtx {
  const Defs* defs;
  std::map<std::string, std::set<Name>> lfp;
  std::set<Name> exclude;  // names the fresh streams must avoid
  int next_candidate = 0;
  bool canon_mode;  // assign canonical binder names vs. plain substitution

  Name fresh() {
    for (;;) {
      Name cand{"x" + std::to_string(next_candidate++)};
      if (!exclude.count(cand)) {
        exclude.insert(cand);
        return cand;
      }
    }
  }
};

ProcessPtr walk(const Process& p, Env env, RenameCtx& ctx);

ProcessPtr walk_restrict(const Process& p, Env env, RenameCtx& ctx) {
  const Process& body = *p.kids[0];
  const Name& x = p.bound;
  if (ctx.canon_mode) {
    if (const_blocks(body, x, ctx.defs, ctx.lfp)) {
      env.erase(x);  // rigid binder shadows any outer renaming
      return make_res(walk(body, std::move(env), ctx), x);
    }
    Name nu = ctx.fresh();
    env[x] = nu;
    return make_res(walk(body, std::move(env), ctx), nu);
  }
  env.erase(x);
  // Capture: some substituted name would collide with this binder.
  bool capture = false;
  if (!env.empty()) {
    auto body_fn = fn(body, ctx.defs, &ctx.lfp);
    if (!ctx.defs && has_const(body))
      for (const auto& [from, to] : env) body_fn.insert(from);
    for (const auto& [from, to] : env)
      if (to == x && from != x && body_fn.count(from)) capture = true;
  }
  if (!capture) return make_res(walk(body, std::move(env), ctx), x);
  Name fresh = ctx.fresh();
  env[x] = fresh;
  return make_res(walk(body, std::move(env), ctx), fresh);
}

ProcessPtr walk_relabel(const Process& p, Env env, RenameCtx& ctx) {
  const Process& q = *p.kids[0];
  std::set<Name> dom;
  for (const auto& r : p.renames) dom.insert(r.from);

  // The renaming applies after this operator, so its images land on the
  // right-hand sides; names consumed by the operator are left alone.
  std::vector<Renaming> out;
  for (const auto& r : p.renames) out.push_back(Renaming{r.from, apply_env(env, r.to)});

  Env inner = env;
  for (const auto& d : dom) inner.erase(d);

  if (!ctx.canon_mode) {
    // A pass-through name mapped onto a left-hand side would wrongly be
    // consumed by the operator; rename those left-hand sides apart first.
    auto q_fn = fn(q, ctx.defs, &ctx.lfp);
    if (!ctx.defs && has_const(q))
      for (const auto& [from, to] : inner) q_fn.insert(from);
    std::map<Name, Name> apart;
    for (const auto& [from, to] : inner)
      if (dom.count(to) && q_fn.count(from) && !apart.count(to)) apart[to] = ctx.fresh();
    for (auto& r : out)
      if (auto it = apart.find(r.from); it != apart.end()) r.from = it->second;
    for (const auto& [old_lhs, fresh] : apart) inner[old_lhs] = fresh;
  }
  // In canon mode the candidate stream avoids every relabeling left-hand
  // side, so no collision is possible.
  return make_rel(walk(q, std::move(inner), ctx), std::move(out));
}

ProcessPtr walk_const(const Process& p, const Env& env, RenameCtx& ctx) {
  Env relevant;
  if (ctx.defs) {
    auto it = ctx.lfp.find(p.constant);
    for (const auto& [from, to] : env)
      if (from != to && it != ctx.lfp.end() && it->second.count(from)) relevant[from] = to;
  } else {
    for (const auto& [from, to] : env)
      if (from != to) relevant[from] = to;
  }
  if (relevant.empty()) return make_const(p.constant);
  // Cannot rewrite inside the definition; keep a residual relabeling.
  std::vector<Renaming> sigma;
  for (const auto& [from, to] : relevant) sigma.push_back(Renaming{from, to});
  return make_rel(make_const(p.constant), std::move(sigma));
}

ProcessPtr walk(const Process& p, Env env, RenameCtx& ctx) {
  switch (p.op) {
    case Op::Nil:
      return make_nil();
    case Op::Prefix:
      return make_prefix(apply_env_label(env, p.label), walk(*p.kids[0], env, ctx), p.key);
    case Op::Sum: {
      std::vector<ProcessPtr> kids;
      kids.reserve(p.kids.size());
      for (const auto& k : p.kids) kids.push_back(walk(*k, env, ctx));
      return make_sum(std::move(kids));
    }
    case Op::Par:
      return make_par(walk(*p.kids[0], env, ctx), walk(*p.kids[1], env, ctx));
    case Op::Restrict:
      return walk_restrict(p, std::move(env), ctx);
    case Op::Relabel:
      return walk_relabel(p, std::move(env), ctx);
    case Op::Const:
      return walk_const(p, env, ctx);
  }
  return make_nil();
}

void collect_all_names(const Process& p, std::set<Name>& out) {
  switch (p.op) {
    case Op::Prefix:
      if (!p.label.is_tau()) out.insert(p.label.name);
      break;
    case Op::Restrict:
      out.insert(p.bound);
      break;
    case Op::Relabel:
      for (const auto& r : p.renames) {
        out.insert(r.from);
        out.insert(r.to);
      }
      break;
    default:
      break;
  }
  for (const auto& k : p.kids) collect_all_names(*k, out);
}

}  // namespace

std::set<Name> free_names(const Process& p, const Defs* defs) {
  auto lfp = lfp_for(p, defs);
  return fn(p, defs, &lfp);
}

std::set<Name> all_names(const Process& p) {
  std::set<Name> out;
  collect_all_names(p, out);
  return out;
}

Label apply_to_label(const Label& l, const std::vector<Renaming>& sigma) {
  if (l.is_tau()) return l;
  Label out = l;
  for (const auto& r : sigma)
    if (r.from == l.name) {
      out.name = r.to;
      break;
    }
  return out;
}

ProcessPtr apply_relabeling(const Process& p, const std::vector<Renaming>& sigma,
                            const Defs* defs) {
  std::set<Name> lhs;
  for (const auto& r : sigma)
    if (!lhs.insert(r.from).second)
      throw std::invalid_argument("duplicate relabeling source '" + r.from.text + "'");

  RenameCtx ctx;
  ctx.defs = defs;
  ctx.lfp = lfp_for(p, defs);
  ctx.canon_mode = false;
  ctx.exclude = all_names(p);
  for (const auto& r : sigma) {
    ctx.exclude.insert(r.from);
    ctx.exclude.insert(r.to);
  }
  for (const auto& [id, names] : ctx.lfp) ctx.exclude.insert(names.begin(), names.end());

  Env env;
  for (const auto& r : sigma) env[r.from] = r.to;
  return walk(p, std::move(env), ctx);
}

ProcessPtr alpha_canon(const Process& p, const Defs* defs) {
  RenameCtx ctx;
  ctx.defs = defs;
  ctx.lfp = lfp_for(p, defs);
  ctx.canon_mode = true;
  ctx.exclude = fn(p, defs, &ctx.lfp);
  collect_frozen(p, defs, ctx.lfp, ctx.exclude);
  collect_relabel_lhs(p, ctx.exclude);
  return walk(p, Env{}, ctx);
}

std::string alpha_key(const Process& p, const Defs* defs) {
  return pretty(*alpha_canon(p, defs));
}

bool binder_rigid(const Process& body, const Name& bound, const Defs* defs) {
  auto lfp = lfp_for(body, defs);
  return const_blocks(body, bound, defs, lfp);
}

}  // namespace ccsw
