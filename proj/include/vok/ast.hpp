#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vok/value.hpp"

namespace vok {

struct Pos {
  int line = 0;
  int column = 0;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string code;     // E_SYNTAX, E_DUP_EVENT, ...
  std::string message;
  Pos pos;
  std::string label;    // offending invariant/axiom/guard label, when known

  std::string str() const {
    std::string s = severity == Severity::Error ? "error" : "warning";
    s += " [" + code + "] ";
    if (pos.line > 0)
      s += std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
    if (!label.empty()) s += "@" + label + ": ";
    s += message;
    return s;
  }
};

using Diagnostics = std::vector<Diagnostic>;

// One node type covers both expressions and predicates; scope checking keeps
// them apart. Nodes are immutable and shared.
enum class ExprKind {
  Ident,
  IntLit,
  BoolLit,
  Literal,       // pre-evaluated constant (constant folding)
  SetEnum,       // {a, b, c}; empty = {}
  Comprehension, // {head | body}, binders drawn from head identifiers
  Union,
  Inter,
  Diff,
  Product,
  Maplet,
  Image,         // r[S]
  Inverse,       // r~
  Dom,
  Ran,
  DomRes,        // S <| r
  DomSub,        // S <<| r
  RanRes,        // r |> S
  RanSub,        // r |>> S
  Apply,         // f(x)
  Relation,      // A <-> B
  TotalFn,       // A --> B
  PartialFn,     // A +-> B
  PartialInj,    // A >+> B
  Pow,           // POW(S)
  // predicates
  Partition,     // partition(S, e1, ..., en)
  In,
  NotIn,
  Subset,        // <:
  Eq,
  Neq,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Imply,
  Not,
  Forall,
  Exists,
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;
using Pred = Expr;

struct ExprNode {
  ExprKind kind;
  Pos pos;
  std::string name;               // Ident
  long long int_value = 0;        // IntLit
  bool bool_value = false;        // BoolLit
  Value literal;                  // Literal
  std::vector<std::string> binders;  // Forall/Exists
  std::vector<Expr> children;     // operands; Comprehension: [head, body]
};

inline Expr make_expr(ExprKind kind, Pos pos, std::vector<Expr> children = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->pos = pos;
  n->children = std::move(children);
  return n;
}

inline Expr make_ident(std::string name, Pos pos = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Ident;
  n->pos = pos;
  n->name = std::move(name);
  return n;
}

inline Expr make_int(long long v, Pos pos = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::IntLit;
  n->pos = pos;
  n->int_value = v;
  return n;
}

inline Expr make_bool(bool v, Pos pos = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::BoolLit;
  n->pos = pos;
  n->bool_value = v;
  return n;
}

inline Expr make_literal(Value v, Pos pos = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Literal;
  n->pos = pos;
  n->literal = std::move(v);
  return n;
}

inline Expr make_quantifier(ExprKind kind, std::vector<std::string> binders,
                            Expr body, Pos pos = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->pos = pos;
  n->binders = std::move(binders);
  n->children = {std::move(body)};
  return n;
}

// Structural equality, ignoring positions.
inline bool expr_equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Ident:
      if (a->name != b->name) return false;
      break;
    case ExprKind::IntLit:
      if (a->int_value != b->int_value) return false;
      break;
    case ExprKind::BoolLit:
      if (a->bool_value != b->bool_value) return false;
      break;
    case ExprKind::Literal:
      if (a->literal != b->literal) return false;
      break;
    case ExprKind::Forall:
    case ExprKind::Exists:
      if (a->binders != b->binders) return false;
      break;
    default:
      break;
  }
  if (a->children.size() != b->children.size()) return false;
  for (size_t i = 0; i < a->children.size(); i++)
    if (!expr_equal(a->children[i], b->children[i])) return false;
  return true;
}

struct Labeled {
  std::string label;
  Pred pred;
};

// Deterministic assignment. `index` is set for the functional form
// `f(i) := e`, which updates a single mapping of f.
struct Action {
  std::string label;
  std::string variable;
  Expr index;  // null for plain `x := e`
  Expr rhs;
  Pos pos;
};

enum class EventKind { Plain, Extends, Refines };

struct Event {
  std::string name;
  EventKind kind = EventKind::Plain;
  std::string parent;  // for Extends/Refines
  std::vector<std::string> params;
  std::vector<Labeled> guards;
  std::vector<Action> actions;
  Pos pos;
};

struct Machine {
  std::string name;
  std::string refines;             // empty if none
  std::vector<std::string> sees;
  std::vector<std::string> variables;
  std::vector<Labeled> invariants;
  std::vector<Event> events;       // INITIALISATION included
  Pos pos;

  const Event* find_event(const std::string& n) const {
    for (const auto& e : events)
      if (e.name == n) return &e;
    return nullptr;
  }
};

struct Context {
  std::string name;
  std::string extends;             // empty if none
  std::vector<std::string> sets;
  std::vector<std::string> constants;
  std::vector<Labeled> axioms;
  Pos pos;
};

inline const std::string kInitEvent = "INITIALISATION";

}  // namespace vok
