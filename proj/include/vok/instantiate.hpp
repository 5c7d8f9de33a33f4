#pragma once

#include <map>
#include <string>
#include <vector>

#include "vok/ast.hpp"
#include "vok/eval.hpp"

namespace vok {

struct InstantiatedContext {
  Universe universe;
  Env env;           // constants and set extents
  Diagnostics diags;
  std::vector<std::string> chain;  // context names, root first

  bool ok() const { return !has_errors(diags); }
};

namespace detail {

// partition(S, {c1}, ..., {cn}) where S is an extent-less declared set and
// every ci is a distinct, not-yet-valued constant.
inline bool partition_defines(const Pred& ax, const std::set<std::string>& sets,
                              const std::set<std::string>& constants,
                              const Env& env, const Universe& u,
                              std::string& set_name,
                              std::vector<std::string>& members) {
  if (ax->kind != ExprKind::Partition || ax->children.empty()) return false;
  const Expr& target = ax->children[0];
  if (target->kind != ExprKind::Ident) return false;
  if (!sets.count(target->name) || u.has(target->name)) return false;
  members.clear();
  for (size_t i = 1; i < ax->children.size(); i++) {
    const Expr& part = ax->children[i];
    if (part->kind != ExprKind::SetEnum || part->children.size() != 1) return false;
    const Expr& el = part->children[0];
    if (el->kind != ExprKind::Ident) return false;
    if (!constants.count(el->name) || env.find(el->name)) return false;
    for (const auto& prev : members)
      if (prev == el->name) return false;
    members.push_back(el->name);
  }
  set_name = target->name;
  return true;
}

inline bool equation_defines(const Pred& ax, const std::set<std::string>& constants,
                             const Env& env, std::string& const_name,
                             Expr& rhs) {
  if (ax->kind != ExprKind::Eq) return false;
  const Expr& lhs = ax->children[0];
  if (lhs->kind != ExprKind::Ident) return false;
  if (!constants.count(lhs->name) || env.find(lhs->name)) return false;
  for (const auto& name : free_vars(ax->children[1])) {
    if (name == lhs->name) return false;
    if (!env.find(name)) return false;
  }
  const_name = lhs->name;
  rhs = ax->children[1];
  return true;
}

}  // namespace detail

// Gives every deferred set a finite extent (partition axioms first, then
// `scopes` with synthetic atoms), computes constants from defining equations
// `c = expr`, then checks every axiom.
inline InstantiatedContext instantiate_context(
    const std::vector<const Context*>& chain,
    const std::map<std::string, int>& scopes) {
  InstantiatedContext out;
  std::set<std::string> sets, constants;
  for (const Context* c : chain) {
    out.chain.push_back(c->name);
    for (const auto& s : c->sets)
      if (!sets.insert(s).second)
        out.diags.push_back({Diagnostic::Severity::Error, "E_DUP_SET",
                             "set '" + s + "' declared twice in chain", c->pos, ""});
    for (const auto& k : c->constants)
      if (!constants.insert(k).second)
        out.diags.push_back({Diagnostic::Severity::Error, "E_DUP_CONSTANT",
                             "constant '" + k + "' declared twice in chain",
                             c->pos, ""});
  }

  std::vector<const Labeled*> axioms;
  for (const Context* c : chain)
    for (const auto& ax : c->axioms) axioms.push_back(&ax);

  auto bind_extent = [&](const std::string& set_name,
                         const std::vector<std::string>& atoms) {
    out.universe.sets[set_name] = atoms;
    std::vector<Value> vals;
    vals.reserve(atoms.size());
    for (const auto& a : atoms) vals.push_back(Value::atom(a));
    out.env.bind(set_name, Value::set(std::move(vals)));
  };

  std::vector<bool> consumed(axioms.size(), false);
  for (;;) {
    bool progress = false;
    for (size_t i = 0; i < axioms.size(); i++) {
      if (consumed[i]) continue;
      std::string name;
      std::vector<std::string> members;
      Expr rhs;
      if (detail::partition_defines(axioms[i]->pred, sets, constants, out.env,
                                    out.universe, name, members)) {
        bind_extent(name, members);
        for (const auto& m : members) out.env.bind(m, Value::atom(m));
        consumed[i] = true;
        progress = true;
      } else if (detail::equation_defines(axioms[i]->pred, constants, out.env,
                                          name, rhs)) {
        try {
          EvalScope scope(out.env);
          out.env.bind(name, eval(rhs, scope));
          consumed[i] = true;
          progress = true;
        } catch (const Error& e) {
          out.diags.push_back({Diagnostic::Severity::Error, e.code(),
                               "while computing constant '" + name +
                                   "': " + e.what(),
                               axioms[i]->pred->pos, axioms[i]->label});
          consumed[i] = true;
          progress = true;
        }
      }
    }
    if (!progress) {
      // fall back to scope overrides for sets that are still extent-less
      bool scoped = false;
      for (const auto& s : sets) {
        if (out.universe.has(s)) continue;
        auto it = scopes.find(s);
        if (it == scopes.end()) continue;
        std::vector<std::string> atoms;
        for (int k = 1; k <= it->second; k++)
          atoms.push_back(s + std::to_string(k));
        bind_extent(s, atoms);
        scoped = true;
        break;
      }
      if (!scoped) break;
    }
  }

  for (const auto& s : sets)
    if (!out.universe.has(s))
      out.diags.push_back({Diagnostic::Severity::Error, "E_NO_EXTENT",
                           "deferred set '" + s +
                               "' has neither a partition axiom nor a scope",
                           {}, ""});
  for (const auto& k : constants)
    if (!out.env.find(k))
      out.diags.push_back({Diagnostic::Severity::Error, "E_UNSOLVED_CONSTANT",
                           "constant '" + k +
                               "' has no defining equation and no value",
                           {}, ""});

  for (const Labeled* ax : axioms) {
    bool checkable = true;
    for (const auto& name : free_vars(ax->pred))
      if (!out.env.find(name)) checkable = false;
    if (!checkable) continue;  // already reported as unsolved/no-extent
    try {
      EvalScope scope(out.env);
      std::string witness;
      if (!eval_pred_with_witness(ax->pred, scope, witness)) {
        std::string msg = "axiom does not hold";
        if (!witness.empty()) msg += " (witness: " + witness + ")";
        out.diags.push_back({Diagnostic::Severity::Error, "E_AXIOM_FAILED", msg,
                             ax->pred->pos, ax->label});
      }
    } catch (const Error& e) {
      out.diags.push_back({Diagnostic::Severity::Error, e.code(), e.what(),
                           ax->pred->pos, ax->label});
    }
  }
  return out;
}

}  // namespace vok
