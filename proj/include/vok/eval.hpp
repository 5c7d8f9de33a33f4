#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vok/ast.hpp"
#include "vok/printer.hpp"
#include "vok/value.hpp"

namespace vok {

// Constructed sets may not exceed this many elements.
inline constexpr size_t kEnumLimit = 1'000'000;
// Powerset / subset-quantification base sets may not exceed this many.
inline constexpr size_t kPowBaseLimit = 16;

// Finite extents of the carrier sets, in declaration order.
struct Universe {
  std::map<std::string, std::vector<std::string>> sets;

  bool has(const std::string& name) const { return sets.count(name) != 0; }
};

// Name -> value bindings for constants (set extents included as set values).
struct Env {
  std::map<std::string, Value> map;

  const Value* find(const std::string& name) const {
    auto it = map.find(name);
    return it == map.end() ? nullptr : &it->second;
  }

  void bind(const std::string& name, Value v) { map[name] = std::move(v); }
};

// Lookup chain used during evaluation: local bindings (event parameters and
// quantifier variables), then machine state, then an optional secondary
// frame (abstract variables during simulation), then constants.
class EvalScope {
 public:
  explicit EvalScope(const Env& consts) : consts_(&consts) {}

  void set_state(const std::vector<std::string>* names,
                 const std::vector<Value>* values) {
    state_names_ = names;
    state_values_ = values;
  }

  void set_extra(const std::vector<std::string>* names,
                 const std::vector<Value>* values) {
    extra_names_ = names;
    extra_values_ = values;
  }

  void push_local(const std::string& name, Value v) {
    locals_.emplace_back(name, std::move(v));
  }

  void pop_local() { locals_.pop_back(); }

  size_t local_mark() const { return locals_.size(); }
  void pop_to(size_t mark) { locals_.resize(mark); }

  const Value* find(const std::string& name) const {
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it)
      if (it->first == name) return &it->second;
    if (state_names_) {
      for (size_t i = 0; i < state_names_->size(); i++)
        if ((*state_names_)[i] == name) return &(*state_values_)[i];
    }
    if (extra_names_) {
      for (size_t i = 0; i < extra_names_->size(); i++)
        if ((*extra_names_)[i] == name) return &(*extra_values_)[i];
    }
    return consts_->find(name);
  }

  const Env& consts() const { return *consts_; }

 private:
  const Env* consts_;
  const std::vector<std::string>* state_names_ = nullptr;
  const std::vector<Value>* state_values_ = nullptr;
  const std::vector<std::string>* extra_names_ = nullptr;
  const std::vector<Value>* extra_values_ = nullptr;
  std::vector<std::pair<std::string, Value>> locals_;
};

// ---- free variables --------------------------------------------------------

namespace detail {

inline void free_vars_rec(const Expr& e, std::vector<std::string>& bound,
                          std::set<std::string>& out) {
  if (!e) return;
  switch (e->kind) {
    case ExprKind::Ident: {
      for (const auto& b : bound)
        if (b == e->name) return;
      out.insert(e->name);
      return;
    }
    case ExprKind::Forall:
    case ExprKind::Exists: {
      size_t mark = bound.size();
      for (const auto& b : e->binders) bound.push_back(b);
      free_vars_rec(e->children[0], bound, out);
      bound.resize(mark);
      return;
    }
    case ExprKind::Comprehension: {
      size_t mark = bound.size();
      for (const auto& b : e->binders) bound.push_back(b);
      for (const auto& c : e->children) free_vars_rec(c, bound, out);
      bound.resize(mark);
      return;
    }
    default:
      for (const auto& c : e->children) free_vars_rec(c, bound, out);
      return;
  }
}

}  // namespace detail

inline std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  detail::free_vars_rec(e, bound, out);
  return out;
}

// ---- evaluation ------------------------------------------------------------

inline Value eval(const Expr& e, EvalScope& scope);
inline bool eval_pred(const Pred& p, EvalScope& scope);

namespace detail {

[[noreturn]] inline void eval_fail(const std::string& code, const std::string& msg,
                                   Pos pos) {
  std::string where;
  if (pos.line > 0)
    where = " (at " + std::to_string(pos.line) + ":" + std::to_string(pos.column) + ")";
  throw Error(code, msg + where);
}

inline const std::vector<Value>& as_set(const Value& v, const char* what, Pos pos) {
  if (!v.is_set()) eval_fail("E_TYPE", std::string(what) + " requires a set", pos);
  return v.elements();
}

inline void check_size(size_t n, Pos pos) {
  if (n > kEnumLimit)
    eval_fail("E_ENUM_LIMIT", "constructed set exceeds " +
                                  std::to_string(kEnumLimit) + " elements",
              pos);
}

inline Value set_union(const Value& a, const Value& b, Pos pos) {
  const auto& xs = as_set(a, "union", pos);
  const auto& ys = as_set(b, "union", pos);
  std::vector<Value> out;
  out.reserve(xs.size() + ys.size());
  size_t i = 0, j = 0;
  while (i < xs.size() && j < ys.size()) {
    int c = compare(xs[i], ys[j]);
    if (c < 0) out.push_back(xs[i++]);
    else if (c > 0) out.push_back(ys[j++]);
    else { out.push_back(xs[i++]); j++; }
  }
  while (i < xs.size()) out.push_back(xs[i++]);
  while (j < ys.size()) out.push_back(ys[j++]);
  check_size(out.size(), pos);
  return Value::set_normalized(std::move(out));
}

inline Value set_inter(const Value& a, const Value& b, Pos pos) {
  const auto& xs = as_set(a, "intersection", pos);
  const auto& ys = as_set(b, "intersection", pos);
  std::vector<Value> out;
  size_t i = 0, j = 0;
  while (i < xs.size() && j < ys.size()) {
    int c = compare(xs[i], ys[j]);
    if (c < 0) i++;
    else if (c > 0) j++;
    else { out.push_back(xs[i++]); j++; }
  }
  return Value::set_normalized(std::move(out));
}

inline Value set_diff(const Value& a, const Value& b, Pos pos) {
  const auto& xs = as_set(a, "difference", pos);
  const auto& ys = as_set(b, "difference", pos);
  std::vector<Value> out;
  size_t i = 0, j = 0;
  while (i < xs.size()) {
    if (j >= ys.size()) { out.push_back(xs[i++]); continue; }
    int c = compare(xs[i], ys[j]);
    if (c < 0) out.push_back(xs[i++]);
    else if (c > 0) j++;
    else { i++; j++; }
  }
  return Value::set_normalized(std::move(out));
}

inline Value set_product(const Value& a, const Value& b, Pos pos) {
  const auto& xs = as_set(a, "cartesian product", pos);
  const auto& ys = as_set(b, "cartesian product", pos);
  check_size(xs.size() * ys.size(), pos);
  std::vector<Value> out;
  out.reserve(xs.size() * ys.size());
  for (const auto& x : xs)
    for (const auto& y : ys) out.push_back(Value::pair(x, y));
  // outer-major iteration over sorted inputs is already canonical
  return Value::set_normalized(std::move(out));
}

inline const std::vector<Value>& as_relation(const Value& v, const char* what,
                                             Pos pos) {
  const auto& xs = as_set(v, what, pos);
  for (const auto& x : xs)
    if (!x.is_pair())
      eval_fail("E_TYPE", std::string(what) + " requires a set of pairs", pos);
  return xs;
}

inline Value rel_image(const Value& r, const Value& s, Pos pos) {
  const auto& pairs = as_relation(r, "relational image", pos);
  as_set(s, "relational image", pos);
  std::vector<Value> out;
  for (const auto& p : pairs)
    if (s.contains(p.left())) out.push_back(p.right());
  Value::normalize(out);
  return Value::set_normalized(std::move(out));
}

inline Value rel_inverse(const Value& r, Pos pos) {
  const auto& pairs = as_relation(r, "inverse", pos);
  std::vector<Value> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(Value::pair(p.right(), p.left()));
  Value::normalize(out);
  return Value::set_normalized(std::move(out));
}

inline Value rel_dom(const Value& r, Pos pos) {
  const auto& pairs = as_relation(r, "dom", pos);
  std::vector<Value> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.left());
  Value::normalize(out);
  return Value::set_normalized(std::move(out));
}

inline Value rel_ran(const Value& r, Pos pos) {
  const auto& pairs = as_relation(r, "ran", pos);
  std::vector<Value> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.right());
  Value::normalize(out);
  return Value::set_normalized(std::move(out));
}

inline Value rel_restrict(const Value& r, const Value& s, bool domain_side,
                          bool keep, Pos pos) {
  const char* what = domain_side ? "domain restriction" : "range restriction";
  const auto& pairs = as_relation(r, what, pos);
  as_set(s, what, pos);
  std::vector<Value> out;
  for (const auto& p : pairs) {
    const Value& key = domain_side ? p.left() : p.right();
    if (s.contains(key) == keep) out.push_back(p);
  }
  return Value::set_normalized(std::move(out));
}

inline Value apply_fn(const Value& f, const Value& x, Pos pos) {
  const auto& pairs = as_relation(f, "function application", pos);
  const Value* found = nullptr;
  size_t lo = 0, hi = pairs.size();
  // pairs sort by (left, right); locate the first pair with left >= x
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (compare(pairs[mid].left(), x) < 0) lo = mid + 1; else hi = mid;
  }
  for (size_t i = lo; i < pairs.size() && compare(pairs[i].left(), x) == 0; i++) {
    if (found)
      eval_fail("E_APPLY_AMBIGUOUS",
                "relation is not functional at " + render(x), pos);
    found = &pairs[i].right();
  }
  if (!found)
    eval_fail("E_APPLY_UNDEFINED",
              "function application outside domain: " + render(x), pos);
  return *found;
}

inline bool is_functional(const std::vector<Value>& pairs) {
  for (size_t i = 1; i < pairs.size(); i++)
    if (compare(pairs[i - 1].left(), pairs[i].left()) == 0) return false;
  return true;
}

inline bool is_injective(const std::vector<Value>& pairs) {
  std::vector<const Value*> rights;
  rights.reserve(pairs.size());
  for (const auto& p : pairs) rights.push_back(&p.right());
  std::sort(rights.begin(), rights.end(),
            [](const Value* a, const Value* b) { return compare(*a, *b) < 0; });
  for (size_t i = 1; i < rights.size(); i++)
    if (compare(*rights[i - 1], *rights[i]) == 0) return false;
  return true;
}

inline Value powerset(const Value& s, Pos pos) {
  const auto& xs = as_set(s, "POW", pos);
  if (xs.size() > kPowBaseLimit)
    eval_fail("E_POW_LIMIT", "powerset base has " + std::to_string(xs.size()) +
                                 " elements (limit " +
                                 std::to_string(kPowBaseLimit) + ")",
              pos);
  size_t n = xs.size();
  std::vector<Value> out;
  out.reserve(size_t(1) << n);
  for (size_t mask = 0; mask < (size_t(1) << n); mask++) {
    std::vector<Value> sub;
    for (size_t i = 0; i < n; i++)
      if (mask >> i & 1) sub.push_back(xs[i]);
    out.push_back(Value::set_normalized(std::move(sub)));
  }
  Value::normalize(out);
  return Value::set_normalized(std::move(out));
}

// Membership test that understands relation/function space constructors and
// POW on the right-hand side without materialising them.
inline bool value_in(const Value& v, const Expr& domain, EvalScope& scope) {
  switch (domain->kind) {
    case ExprKind::Relation:
    case ExprKind::TotalFn:
    case ExprKind::PartialFn:
    case ExprKind::PartialInj: {
      if (!v.is_set()) return false;
      for (const auto& el : v.elements()) {
        if (!el.is_pair()) return false;
        if (!value_in(el.left(), domain->children[0], scope)) return false;
        if (!value_in(el.right(), domain->children[1], scope)) return false;
      }
      if (domain->kind == ExprKind::Relation) return true;
      if (!is_functional(v.elements())) return false;
      if (domain->kind == ExprKind::PartialFn) return true;
      if (domain->kind == ExprKind::PartialInj) return is_injective(v.elements());
      // TotalFn: domain of v must cover the left set exactly
      Value left = eval(domain->children[0], scope);
      return rel_dom(v, domain->pos) == left;
    }
    case ExprKind::Pow: {
      if (!v.is_set()) return false;
      for (const auto& el : v.elements())
        if (!value_in(el, domain->children[0], scope)) return false;
      return true;
    }
    default: {
      Value d = eval(domain, scope);
      if (!d.is_set())
        eval_fail("E_TYPE", "membership requires a set on the right",
                  domain->pos);
      return d.contains(v);
    }
  }
}

// ---- binder enumeration ----------------------------------------------------

enum class DomainKind { Elements, Subsets, Singleton };

struct BinderSpec {
  std::string name;
  DomainKind kind = DomainKind::Elements;
  Expr domain;
};

inline void flatten_conjuncts(const Pred& p, std::vector<Pred>& out) {
  if (p->kind == ExprKind::And) {
    flatten_conjuncts(p->children[0], out);
    flatten_conjuncts(p->children[1], out);
  } else {
    out.push_back(p);
  }
}

// Conjuncts scanned for binder domains: the antecedent for an implication
// body, the body's conjunction otherwise.
inline std::vector<Pred> domain_conjuncts(const Pred& body) {
  std::vector<Pred> out;
  if (body->kind == ExprKind::Imply)
    flatten_conjuncts(body->children[0], out);
  else
    flatten_conjuncts(body, out);
  return out;
}

// For each binder, the first conjunct of shape `x : E`, `x <: E` or `x = E`
// fixes its domain. Returns specs ordered so that each domain only references
// binders that come earlier; nullopt when a binder has no domain or the
// dependencies are cyclic (the offending name goes to `missing`).
inline std::optional<std::vector<BinderSpec>> find_binder_domains(
    const std::vector<std::string>& binders, const std::vector<Pred>& conjuncts,
    std::string& missing) {
  std::vector<BinderSpec> specs;
  for (const auto& name : binders) {
    bool found = false;
    for (const auto& c : conjuncts) {
      if (c->children.size() != 2) continue;
      const Expr& lhs = c->children[0];
      if (lhs->kind != ExprKind::Ident || lhs->name != name) continue;
      DomainKind kind;
      if (c->kind == ExprKind::In) kind = DomainKind::Elements;
      else if (c->kind == ExprKind::Subset) kind = DomainKind::Subsets;
      else if (c->kind == ExprKind::Eq) kind = DomainKind::Singleton;
      else continue;
      auto fv = free_vars(c->children[1]);
      if (fv.count(name)) continue;  // self-referential, keep looking
      specs.push_back({name, kind, c->children[1]});
      found = true;
      break;
    }
    if (!found) {
      missing = name;
      return std::nullopt;
    }
  }
  // order by dependencies, preferring declaration order
  std::vector<BinderSpec> ordered;
  std::vector<bool> placed(specs.size(), false);
  std::set<std::string> available;
  for (size_t round = 0; round < specs.size(); round++) {
    bool progress = false;
    for (size_t i = 0; i < specs.size(); i++) {
      if (placed[i]) continue;
      auto fv = free_vars(specs[i].domain);
      bool ready = true;
      for (const auto& other : binders)
        if (other != specs[i].name && fv.count(other) && !available.count(other))
          ready = false;
      if (ready) {
        available.insert(specs[i].name);
        ordered.push_back(specs[i]);
        placed[i] = true;
        progress = true;
        break;
      }
    }
    if (!progress) break;
  }
  if (ordered.size() != specs.size()) {
    for (size_t i = 0; i < specs.size(); i++)
      if (!placed[i]) missing = specs[i].name;
    return std::nullopt;
  }
  return ordered;
}

inline std::vector<Value> domain_values(const BinderSpec& spec, EvalScope& scope) {
  switch (spec.kind) {
    case DomainKind::Singleton:
      return {eval(spec.domain, scope)};
    case DomainKind::Elements: {
      Value d = eval(spec.domain, scope);
      return as_set(d, "binder domain", spec.domain->pos);
    }
    case DomainKind::Subsets: {
      Value d = eval(spec.domain, scope);
      Value p = powerset(d, spec.domain->pos);
      return p.elements();
    }
  }
  return {};
}

// Depth-first enumeration over the (topologically ordered) binder domains.
// `fn` returns false to stop early; the function returns false when stopped.
inline bool for_each_binding(const std::vector<BinderSpec>& specs, size_t idx,
                             EvalScope& scope,
                             const std::function<bool()>& fn) {
  if (idx == specs.size()) return fn();
  std::vector<Value> values = domain_values(specs[idx], scope);
  for (auto& v : values) {
    scope.push_local(specs[idx].name, v);
    bool cont = for_each_binding(specs, idx + 1, scope, fn);
    scope.pop_local();
    if (!cont) return false;
  }
  return true;
}

inline std::vector<BinderSpec> binder_specs_or_fail(
    const std::vector<std::string>& binders, const Pred& body,
    const std::string& err_code, Pos pos) {
  std::string missing;
  auto specs = find_binder_domains(binders, domain_conjuncts(body), missing);
  if (!specs)
    eval_fail(err_code, "no domain-defining conjunct for '" + missing + "'", pos);
  return *specs;
}

}  // namespace detail

inline Value eval(const Expr& e, EvalScope& scope) {
  using namespace detail;
  switch (e->kind) {
    case ExprKind::Ident: {
      const Value* v = scope.find(e->name);
      if (!v) eval_fail("E_SCOPE", "unbound identifier '" + e->name + "'", e->pos);
      return *v;
    }
    case ExprKind::IntLit:
      return Value::integer(e->int_value);
    case ExprKind::BoolLit:
      return Value::boolean(e->bool_value);
    case ExprKind::Literal:
      return e->literal;
    case ExprKind::SetEnum: {
      std::vector<Value> elems;
      elems.reserve(e->children.size());
      for (const auto& c : e->children) elems.push_back(eval(c, scope));
      return Value::set(std::move(elems));
    }
    case ExprKind::Comprehension: {
      auto specs = binder_specs_or_fail(e->binders, e->children[1],
                                        "E_UNBOUNDED_QUANTIFIER", e->pos);
      std::vector<Value> elems;
      for_each_binding(specs, 0, scope, [&]() {
        if (eval_pred(e->children[1], scope)) {
          elems.push_back(eval(e->children[0], scope));
          check_size(elems.size(), e->pos);
        }
        return true;
      });
      return Value::set(std::move(elems));
    }
    case ExprKind::Union:
      return set_union(eval(e->children[0], scope), eval(e->children[1], scope), e->pos);
    case ExprKind::Inter:
      return set_inter(eval(e->children[0], scope), eval(e->children[1], scope), e->pos);
    case ExprKind::Diff:
      return set_diff(eval(e->children[0], scope), eval(e->children[1], scope), e->pos);
    case ExprKind::Product:
      return set_product(eval(e->children[0], scope), eval(e->children[1], scope), e->pos);
    case ExprKind::Maplet:
      return Value::pair(eval(e->children[0], scope), eval(e->children[1], scope));
    case ExprKind::Image:
      return rel_image(eval(e->children[0], scope), eval(e->children[1], scope), e->pos);
    case ExprKind::Inverse:
      return rel_inverse(eval(e->children[0], scope), e->pos);
    case ExprKind::Dom:
      return rel_dom(eval(e->children[0], scope), e->pos);
    case ExprKind::Ran:
      return rel_ran(eval(e->children[0], scope), e->pos);
    case ExprKind::DomRes:
      return rel_restrict(eval(e->children[1], scope), eval(e->children[0], scope),
                          true, true, e->pos);
    case ExprKind::DomSub:
      return rel_restrict(eval(e->children[1], scope), eval(e->children[0], scope),
                          true, false, e->pos);
    case ExprKind::RanRes:
      return rel_restrict(eval(e->children[0], scope), eval(e->children[1], scope),
                          false, true, e->pos);
    case ExprKind::RanSub:
      return rel_restrict(eval(e->children[0], scope), eval(e->children[1], scope),
                          false, false, e->pos);
    case ExprKind::Apply:
      return apply_fn(eval(e->children[0], scope), eval(e->children[1], scope), e->pos);
    case ExprKind::Pow:
      return powerset(eval(e->children[0], scope), e->pos);
    case ExprKind::Relation:
    case ExprKind::TotalFn:
    case ExprKind::PartialFn:
    case ExprKind::PartialInj:
      eval_fail("E_ENUM_LIMIT",
                "relation/function spaces can only be used as membership targets",
                e->pos);
    default:
      return Value::boolean(eval_pred(e, scope));
  }
}

inline bool eval_pred(const Pred& p, EvalScope& scope) {
  using namespace detail;
  switch (p->kind) {
    case ExprKind::BoolLit:
      return p->bool_value;
    case ExprKind::Literal:
      if (p->literal.is_bool()) return p->literal.bool_value();
      eval_fail("E_TYPE", "expected a boolean", p->pos);
    case ExprKind::And:
      return eval_pred(p->children[0], scope) && eval_pred(p->children[1], scope);
    case ExprKind::Or:
      return eval_pred(p->children[0], scope) || eval_pred(p->children[1], scope);
    case ExprKind::Imply:
      return !eval_pred(p->children[0], scope) || eval_pred(p->children[1], scope);
    case ExprKind::Not:
      return !eval_pred(p->children[0], scope);
    case ExprKind::Eq:
      return eval(p->children[0], scope) == eval(p->children[1], scope);
    case ExprKind::Neq:
      return eval(p->children[0], scope) != eval(p->children[1], scope);
    case ExprKind::In:
      return value_in(eval(p->children[0], scope), p->children[1], scope);
    case ExprKind::NotIn:
      return !value_in(eval(p->children[0], scope), p->children[1], scope);
    case ExprKind::Subset: {
      Value lhs = eval(p->children[0], scope);
      for (const auto& el : as_set(lhs, "subset", p->pos))
        if (!value_in(el, p->children[1], scope)) return false;
      return true;
    }
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge: {
      Value a = eval(p->children[0], scope);
      Value b = eval(p->children[1], scope);
      if (!a.is_int() || !b.is_int())
        eval_fail("E_TYPE", "integer comparison requires integers", p->pos);
      long long x = a.int_value(), y = b.int_value();
      switch (p->kind) {
        case ExprKind::Lt: return x < y;
        case ExprKind::Le: return x <= y;
        case ExprKind::Gt: return x > y;
        default: return x >= y;
      }
    }
    case ExprKind::Partition: {
      Value whole = eval(p->children[0], scope);
      const auto& target = as_set(whole, "partition", p->pos);
      std::vector<Value> collected;
      size_t total = 0;
      for (size_t i = 1; i < p->children.size(); i++) {
        Value part = eval(p->children[i], scope);
        const auto& elems = as_set(part, "partition", p->pos);
        total += elems.size();
        for (const auto& el : elems) collected.push_back(el);
      }
      (void)target;
      Value::normalize(collected);
      if (collected.size() != total) return false;  // overlapping parts
      return Value::set_normalized(std::move(collected)) == whole;
    }
    case ExprKind::Forall: {
      auto specs = binder_specs_or_fail(p->binders, p->children[0],
                                        "E_UNBOUNDED_QUANTIFIER", p->pos);
      bool all = true;
      for_each_binding(specs, 0, scope, [&]() {
        if (!eval_pred(p->children[0], scope)) {
          all = false;
          return false;
        }
        return true;
      });
      return all;
    }
    case ExprKind::Exists: {
      auto specs = binder_specs_or_fail(p->binders, p->children[0],
                                        "E_UNBOUNDED_QUANTIFIER", p->pos);
      bool found = false;
      for_each_binding(specs, 0, scope, [&]() {
        if (eval_pred(p->children[0], scope)) {
          found = true;
          return false;
        }
        return true;
      });
      return found;
    }
    default:
      eval_fail("E_TYPE", "expected a predicate", p->pos);
  }
}

// On failure of a top-level universal axiom, reports the first refuting
// binding, rendered.
inline bool eval_pred_with_witness(const Pred& p, EvalScope& scope,
                                   std::string& witness) {
  using namespace detail;
  if (p->kind == ExprKind::Forall) {
    auto specs = binder_specs_or_fail(p->binders, p->children[0],
                                      "E_UNBOUNDED_QUANTIFIER", p->pos);
    bool all = true;
    for_each_binding(specs, 0, scope, [&]() {
      if (!eval_pred(p->children[0], scope)) {
        witness.clear();
        for (const auto& b : p->binders) {
          if (!witness.empty()) witness += ", ";
          const Value* v = scope.find(b);
          witness += b + " = " + (v ? render(*v) : "?");
        }
        all = false;
        return false;
      }
      return true;
    });
    return all;
  }
  return eval_pred(p, scope);
}

// ---- constant folding ------------------------------------------------------

namespace detail {

inline bool closed_over(const Expr& e, const Env& consts,
                        const std::set<std::string>& shadowed) {
  for (const auto& name : free_vars(e)) {
    if (shadowed.count(name)) return false;
    if (!consts.find(name)) return false;
  }
  return true;
}

inline bool is_expr_kind(ExprKind k) {
  switch (k) {
    case ExprKind::Partition:
    case ExprKind::In:
    case ExprKind::NotIn:
    case ExprKind::Subset:
    case ExprKind::Eq:
    case ExprKind::Neq:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge:
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Imply:
    case ExprKind::Not:
    case ExprKind::Forall:
    case ExprKind::Exists:
      return false;
    default:
      return true;
  }
}

inline Expr fold_rec(const Expr& e, const Env& consts,
                     std::set<std::string>& shadowed) {
  if (!e) return e;
  bool foldable_kind = is_expr_kind(e->kind) && e->kind != ExprKind::Relation &&
                       e->kind != ExprKind::TotalFn &&
                       e->kind != ExprKind::PartialFn &&
                       e->kind != ExprKind::PartialInj &&
                       e->kind != ExprKind::Pow && e->kind != ExprKind::Literal &&
                       e->kind != ExprKind::IntLit && e->kind != ExprKind::BoolLit;
  if (foldable_kind && closed_over(e, consts, shadowed)) {
    try {
      EvalScope scope(consts);
      Value v = eval(e, scope);
      return make_literal(std::move(v), e->pos);
    } catch (const Error&) {
      // leave as-is; evaluation will raise the error in its real context
    }
  }
  bool binder_node = e->kind == ExprKind::Forall || e->kind == ExprKind::Exists ||
                     e->kind == ExprKind::Comprehension;
  std::vector<std::string> added;
  if (binder_node)
    for (const auto& b : e->binders)
      if (shadowed.insert(b).second) added.push_back(b);
  std::vector<Expr> children;
  children.reserve(e->children.size());
  bool changed = false;
  for (const auto& c : e->children) {
    Expr f = fold_rec(c, consts, shadowed);
    changed |= f != c;
    children.push_back(f);
  }
  for (const auto& b : added) shadowed.erase(b);
  if (!changed) return e;
  auto n = std::make_shared<ExprNode>(*e);
  n->children = std::move(children);
  return n;
}

}  // namespace detail

// Replaces subexpressions that are closed over `consts` by their value.
inline Expr fold_expr(const Expr& e, const Env& consts) {
  std::set<std::string> shadowed;
  return detail::fold_rec(e, consts, shadowed);
}

}  // namespace vok
