#pragma once

#include <string>

#include "vok/ast.hpp"

namespace vok {

namespace detail {

// Binding strengths mirror the parser; a child is parenthesised when its
// level is strictly weaker than what its position requires.
inline int expr_level(ExprKind k) {
  switch (k) {
    case ExprKind::Relation:
    case ExprKind::TotalFn:
    case ExprKind::PartialFn:
    case ExprKind::PartialInj:
      return 10;
    case ExprKind::Maplet:
      return 20;
    case ExprKind::Union:
    case ExprKind::Diff:
      return 30;
    case ExprKind::Inter:
      return 40;
    case ExprKind::DomRes:
    case ExprKind::DomSub:
    case ExprKind::RanRes:
    case ExprKind::RanSub:
      return 50;
    case ExprKind::Product:
      return 60;
    case ExprKind::Image:
    case ExprKind::Inverse:
    case ExprKind::Apply:
      return 100;
    default:
      return 200;  // primaries
  }
}

inline void print_expr_to(const Expr& e, std::string& out);

inline void print_child(const Expr& e, int min_level, std::string& out) {
  if (expr_level(e->kind) < min_level) {
    out += '(';
    print_expr_to(e, out);
    out += ')';
  } else {
    print_expr_to(e, out);
  }
}

inline void print_binary(const Expr& e, const char* op, int level,
                         bool left_assoc, std::string& out) {
  print_child(e->children[0], left_assoc ? level : level + 1, out);
  out += ' ';
  out += op;
  out += ' ';
  print_child(e->children[1], level + 1, out);
}

inline void print_pred_to(const Expr& e, std::string& out);

inline int pred_level(ExprKind k) {
  switch (k) {
    case ExprKind::Imply:
      return 10;
    case ExprKind::Or:
      return 20;
    case ExprKind::And:
      return 30;
    default:
      return 100;
  }
}

inline void print_pred_child(const Expr& e, int min_level, std::string& out) {
  if (pred_level(e->kind) < min_level) {
    out += '(';
    print_pred_to(e, out);
    out += ')';
  } else {
    print_pred_to(e, out);
  }
}

inline void print_expr_to(const Expr& e, std::string& out) {
  switch (e->kind) {
    case ExprKind::Ident:
      out += e->name;
      return;
    case ExprKind::IntLit:
      out += std::to_string(e->int_value);
      return;
    case ExprKind::BoolLit:
      out += e->bool_value ? "TRUE" : "FALSE";
      return;
    case ExprKind::Literal:
      out += render(e->literal);
      return;
    case ExprKind::SetEnum: {
      out += '{';
      for (size_t i = 0; i < e->children.size(); i++) {
        if (i) out += ", ";
        print_expr_to(e->children[i], out);
      }
      out += '}';
      return;
    }
    case ExprKind::Comprehension:
      out += '{';
      print_expr_to(e->children[0], out);
      out += " | ";
      print_pred_to(e->children[1], out);
      out += '}';
      return;
    case ExprKind::Union:
      print_binary(e, "\\/", 30, true, out);
      return;
    case ExprKind::Diff:
      print_binary(e, "\\", 30, true, out);
      return;
    case ExprKind::Inter:
      print_binary(e, "/\\", 40, true, out);
      return;
    case ExprKind::Product:
      print_binary(e, "**", 60, true, out);
      return;
    case ExprKind::Maplet:
      print_binary(e, "|->", 20, true, out);
      return;
    case ExprKind::DomRes:
      print_binary(e, "<|", 50, true, out);
      return;
    case ExprKind::DomSub:
      print_binary(e, "<<|", 50, true, out);
      return;
    case ExprKind::RanRes:
      print_binary(e, "|>", 50, true, out);
      return;
    case ExprKind::RanSub:
      print_binary(e, "|>>", 50, true, out);
      return;
    case ExprKind::Relation:
      print_binary(e, "<->", 10, false, out);
      return;
    case ExprKind::TotalFn:
      print_binary(e, "-->", 10, false, out);
      return;
    case ExprKind::PartialFn:
      print_binary(e, "+->", 10, false, out);
      return;
    case ExprKind::PartialInj:
      print_binary(e, ">+>", 10, false, out);
      return;
    case ExprKind::Image:
      print_child(e->children[0], 100, out);
      out += '[';
      print_expr_to(e->children[1], out);
      out += ']';
      return;
    case ExprKind::Inverse:
      print_child(e->children[0], 100, out);
      out += '~';
      return;
    case ExprKind::Apply:
      print_child(e->children[0], 100, out);
      out += '(';
      print_expr_to(e->children[1], out);
      out += ')';
      return;
    case ExprKind::Dom:
      out += "dom(";
      print_expr_to(e->children[0], out);
      out += ')';
      return;
    case ExprKind::Ran:
      out += "ran(";
      print_expr_to(e->children[0], out);
      out += ')';
      return;
    case ExprKind::Pow:
      out += "POW(";
      print_expr_to(e->children[0], out);
      out += ')';
      return;
    default:
      // predicate node reached through expression printing
      print_pred_to(e, out);
      return;
  }
}

inline void print_comparison(const Expr& e, const char* op, std::string& out) {
  print_expr_to(e->children[0], out);
  out += ' ';
  out += op;
  out += ' ';
  print_expr_to(e->children[1], out);
}

inline void print_pred_to(const Expr& e, std::string& out) {
  switch (e->kind) {
    case ExprKind::And:
      print_pred_child(e->children[0], 30, out);
      out += " & ";
      print_pred_child(e->children[1], 31, out);
      return;
    case ExprKind::Or:
      print_pred_child(e->children[0], 20, out);
      out += " or ";
      print_pred_child(e->children[1], 21, out);
      return;
    case ExprKind::Imply:
      print_pred_child(e->children[0], 11, out);
      out += " => ";
      print_pred_child(e->children[1], 10, out);
      return;
    case ExprKind::Not:
      out += "not(";
      print_pred_to(e->children[0], out);
      out += ')';
      return;
    case ExprKind::Forall:
    case ExprKind::Exists: {
      out += e->kind == ExprKind::Forall ? '!' : '#';
      for (size_t i = 0; i < e->binders.size(); i++) {
        if (i) out += ',';
        out += e->binders[i];
      }
      out += ".(";
      print_pred_to(e->children[0], out);
      out += ')';
      return;
    }
    case ExprKind::Partition: {
      out += "partition(";
      for (size_t i = 0; i < e->children.size(); i++) {
        if (i) out += ", ";
        print_expr_to(e->children[i], out);
      }
      out += ')';
      return;
    }
    case ExprKind::Eq:
      print_comparison(e, "=", out);
      return;
    case ExprKind::Neq:
      print_comparison(e, "/=", out);
      return;
    case ExprKind::In:
      print_comparison(e, ":", out);
      return;
    case ExprKind::NotIn:
      print_comparison(e, "/:", out);
      return;
    case ExprKind::Subset:
      print_comparison(e, "<:", out);
      return;
    case ExprKind::Lt:
      print_comparison(e, "<", out);
      return;
    case ExprKind::Le:
      print_comparison(e, "<=", out);
      return;
    case ExprKind::Gt:
      print_comparison(e, ">", out);
      return;
    case ExprKind::Ge:
      print_comparison(e, ">=", out);
      return;
    default:
      print_expr_to(e, out);
      return;
  }
}

}  // namespace detail

inline std::string print_expr(const Expr& e) {
  std::string out;
  detail::print_expr_to(e, out);
  return out;
}

inline std::string print_pred(const Pred& p) {
  std::string out;
  detail::print_pred_to(p, out);
  return out;
}

inline std::string print_machine(const Machine& m) {
  std::string out = "machine " + m.name;
  if (!m.refines.empty()) out += " refines " + m.refines;
  if (!m.sees.empty()) {
    out += " sees";
    for (const auto& s : m.sees) out += " " + s;
  }
  out += "\n";
  if (!m.variables.empty()) {
    out += "variables";
    for (const auto& v : m.variables) out += " " + v;
    out += "\n";
  }
  if (!m.invariants.empty()) {
    out += "invariants\n";
    for (const auto& inv : m.invariants)
      out += "  @" + inv.label + " " + print_pred(inv.pred) + "\n";
  }
  out += "events\n";
  for (const auto& ev : m.events) {
    out += "  event " + ev.name;
    if (ev.kind == EventKind::Extends) out += " extends " + ev.parent;
    if (ev.kind == EventKind::Refines) out += " refines " + ev.parent;
    out += "\n";
    if (!ev.params.empty()) {
      out += "    any";
      for (const auto& p : ev.params) out += " " + p;
      out += " where\n";
    } else if (!ev.guards.empty()) {
      out += "    where\n";
    }
    for (const auto& g : ev.guards)
      out += "      @" + g.label + " " + print_pred(g.pred) + "\n";
    if (!ev.actions.empty()) {
      out += "    then\n";
      for (const auto& a : ev.actions) {
        out += "      @" + a.label + " " + a.variable;
        if (a.index) out += "(" + print_expr(a.index) + ")";
        out += " := " + print_expr(a.rhs) + "\n";
      }
    }
    out += "  end\n";
  }
  out += "end\n";
  return out;
}

inline std::string print_context(const Context& c) {
  std::string out = "context " + c.name;
  if (!c.extends.empty()) out += " extends " + c.extends;
  out += "\n";
  if (!c.sets.empty()) {
    out += "sets";
    for (const auto& s : c.sets) out += " " + s;
    out += "\n";
  }
  if (!c.constants.empty()) {
    out += "constants";
    for (const auto& k : c.constants) out += " " + k;
    out += "\n";
  }
  if (!c.axioms.empty()) {
    out += "axioms\n";
    for (const auto& ax : c.axioms)
      out += "  @" + ax.label + " " + print_pred(ax.pred) + "\n";
  }
  out += "end\n";
  return out;
}

}  // namespace vok
