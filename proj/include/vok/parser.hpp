#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "vok/ast.hpp"

namespace vok {

enum class Tok : uint8_t { Ident, Int, Label, Op, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  Pos pos;
};

// ASCII operator set, longest match first.
inline const char* kOperators[] = {
    "|->", "|>>", "<<|", "<->", "-->", "+->", ">+>",
    "|>", "<|", "<:", "<=", ">=", "/=", "/:", "/\\", "\\/", "**", "=>", ":=",
    "<", ">", "=", "\\", "~", "&", "!", "#", ".", ",", "(", ")", "{", "}",
    "[", "]", ":", "|", ";",
};

inline std::vector<Token> lex(const std::string& text, Diagnostics& diags) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; k++) {
      if (text[i + k] == '\n') {
        line++;
        col = 1;
      } else {
        col++;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Pos pos{line, col};
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i;
      while (i < text.size() && (isalnum(static_cast<unsigned char>(text[i])) ||
                                 text[i] == '_'))
        advance(1);
      out.push_back({Tok::Ident, text.substr(start, i - start), pos});
      continue;
    }
    if (isdigit(static_cast<unsigned char>(c))) {
      size_t start = i;
      while (i < text.size() && isdigit(static_cast<unsigned char>(text[i])))
        advance(1);
      out.push_back({Tok::Int, text.substr(start, i - start), pos});
      continue;
    }
    if (c == '@') {
      size_t start = ++i;
      col++;
      while (i < text.size() && (isalnum(static_cast<unsigned char>(text[i])) ||
                                 text[i] == '_' || text[i] == '.'))
        advance(1);
      if (i == start) {
        diags.push_back({Diagnostic::Severity::Error, "E_SYNTAX",
                         "empty label after '@'", pos, ""});
      } else {
        out.push_back({Tok::Label, text.substr(start, i - start), pos});
      }
      continue;
    }
    bool matched = false;
    for (const char* op : kOperators) {
      size_t n = std::char_traits<char>::length(op);
      if (text.compare(i, n, op) == 0) {
        out.push_back({Tok::Op, op, pos});
        advance(n);
        matched = true;
        break;
      }
    }
    if (!matched) {
      diags.push_back({Diagnostic::Severity::Error, "E_SYNTAX",
                       std::string("unexpected character '") + c + "'", pos, ""});
      advance(1);
    }
  }
  out.push_back({Tok::End, "", Pos{line, col}});
  return out;
}

namespace detail {

struct ParseError {
  Diagnostic diag;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, Diagnostics& diags)
      : toks_(std::move(tokens)), diags_(diags) {}

  const Token& peek(size_t ahead = 0) const {
    size_t k = idx_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }

  const Token& next() {
    const Token& t = peek();
    if (idx_ + 1 < toks_.size()) idx_++;
    return t;
  }

  bool at_op(const char* op) const {
    return peek().type == Tok::Op && peek().text == op;
  }

  bool at_kw(const char* kw) const {
    return peek().type == Tok::Ident && peek().text == kw;
  }

  bool eat_op(const char* op) {
    if (at_op(op)) {
      next();
      return true;
    }
    return false;
  }

  bool eat_kw(const char* kw) {
    if (at_kw(kw)) {
      next();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg, Pos pos = {}) {
    if (pos.line == 0) pos = peek().pos;
    throw ParseError{{Diagnostic::Severity::Error, "E_SYNTAX", msg, pos, ""}};
  }

  void expect_op(const char* op) {
    if (!eat_op(op)) fail(std::string("expected '") + op + "'");
  }

  std::string expect_ident(const char* what) {
    if (peek().type != Tok::Ident) fail(std::string("expected ") + what);
    return next().text;
  }

  void report(const std::string& code, const std::string& msg, Pos pos,
              const std::string& label = "") {
    diags_.push_back({Diagnostic::Severity::Error, code, msg, pos, label});
  }

  // ---- expressions -------------------------------------------------------

  Expr parse_expr() { return parse_relspace(); }

  Expr parse_relspace() {
    Expr lhs = parse_maplet();
    Pos pos = peek().pos;
    ExprKind k;
    if (at_op("<->")) k = ExprKind::Relation;
    else if (at_op("-->")) k = ExprKind::TotalFn;
    else if (at_op("+->")) k = ExprKind::PartialFn;
    else if (at_op(">+>")) k = ExprKind::PartialInj;
    else return lhs;
    next();
    Expr rhs = parse_maplet();
    return make_expr(k, pos, {lhs, rhs});
  }

  Expr parse_maplet() {
    Expr lhs = parse_union();
    while (at_op("|->")) {
      Pos pos = next().pos;
      Expr rhs = parse_union();
      lhs = make_expr(ExprKind::Maplet, pos, {lhs, rhs});
    }
    return lhs;
  }

  Expr parse_union() {
    Expr lhs = parse_inter();
    for (;;) {
      if (at_op("\\/")) {
        Pos pos = next().pos;
        lhs = make_expr(ExprKind::Union, pos, {lhs, parse_inter()});
      } else if (at_op("\\")) {
        Pos pos = next().pos;
        lhs = make_expr(ExprKind::Diff, pos, {lhs, parse_inter()});
      } else {
        return lhs;
      }
    }
  }

  Expr parse_inter() {
    Expr lhs = parse_restrict();
    while (at_op("/\\")) {
      Pos pos = next().pos;
      lhs = make_expr(ExprKind::Inter, pos, {lhs, parse_restrict()});
    }
    return lhs;
  }

  Expr parse_restrict() {
    Expr lhs = parse_product();
    for (;;) {
      ExprKind k;
      if (at_op("<|")) k = ExprKind::DomRes;
      else if (at_op("<<|")) k = ExprKind::DomSub;
      else if (at_op("|>")) k = ExprKind::RanRes;
      else if (at_op("|>>")) k = ExprKind::RanSub;
      else return lhs;
      Pos pos = next().pos;
      lhs = make_expr(k, pos, {lhs, parse_product()});
    }
  }

  Expr parse_product() {
    Expr lhs = parse_postfix();
    while (at_op("**")) {
      Pos pos = next().pos;
      lhs = make_expr(ExprKind::Product, pos, {lhs, parse_postfix()});
    }
    return lhs;
  }

  Expr parse_postfix() {
    Expr e = parse_primary();
    for (;;) {
      if (at_op("~")) {
        Pos pos = next().pos;
        e = make_expr(ExprKind::Inverse, pos, {e});
      } else if (at_op("[")) {
        Pos pos = next().pos;
        Expr arg = parse_expr();
        expect_op("]");
        e = make_expr(ExprKind::Image, pos, {e, arg});
      } else if (at_op("(")) {
        Pos pos = next().pos;
        Expr arg = parse_expr();
        expect_op(")");
        e = make_expr(ExprKind::Apply, pos, {e, arg});
      } else {
        return e;
      }
    }
  }

  Expr parse_primary() {
    Pos pos = peek().pos;
    if (peek().type == Tok::Int) {
      return make_int(std::stoll(next().text), pos);
    }
    if (at_op("(")) {
      next();
      Expr e = parse_expr();
      expect_op(")");
      return e;
    }
    if (at_op("{")) {
      next();
      if (eat_op("}")) return make_expr(ExprKind::SetEnum, pos);
      Expr first = parse_expr();
      if (eat_op("|")) {
        Expr body = parse_pred();
        expect_op("}");
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Comprehension;
        n->pos = pos;
        n->binders = comprehension_binders(first);
        n->children = {first, body};
        return n;
      }
      std::vector<Expr> elems{first};
      while (eat_op(",")) elems.push_back(parse_expr());
      expect_op("}");
      return make_expr(ExprKind::SetEnum, pos, std::move(elems));
    }
    if (peek().type == Tok::Ident) {
      const std::string& name = peek().text;
      if (name == "TRUE" || name == "FALSE") {
        bool v = name == "TRUE";
        next();
        return make_bool(v, pos);
      }
      if ((name == "POW" || name == "dom" || name == "ran") &&
          peek(1).type == Tok::Op && peek(1).text == "(") {
        ExprKind k = name == "POW" ? ExprKind::Pow
                     : name == "dom" ? ExprKind::Dom
                                     : ExprKind::Ran;
        next();
        next();
        Expr arg = parse_expr();
        expect_op(")");
        return make_expr(k, pos, {arg});
      }
      return make_ident(next().text, pos);
    }
    fail("expected expression");
  }

  // Comprehension heads are identifiers or maplets of identifiers; the
  // identifiers become the bound names.
  std::vector<std::string> comprehension_binders(const Expr& head) {
    std::vector<std::string> names;
    collect_binders(head, names);
    for (size_t i = 0; i < names.size(); i++)
      for (size_t j = i + 1; j < names.size(); j++)
        if (names[i] == names[j])
          fail("duplicate bound name '" + names[i] + "' in comprehension",
               head->pos);
    return names;
  }

  void collect_binders(const Expr& e, std::vector<std::string>& out) {
    if (e->kind == ExprKind::Ident) {
      out.push_back(e->name);
    } else if (e->kind == ExprKind::Maplet) {
      collect_binders(e->children[0], out);
      collect_binders(e->children[1], out);
    } else {
      fail("comprehension head must be an identifier or a maplet of identifiers",
           e->pos);
    }
  }

  // ---- predicates --------------------------------------------------------

  Pred parse_pred() { return parse_imply(); }

  Pred parse_imply() {
    Pred lhs = parse_or();
    if (at_op("=>")) {
      Pos pos = next().pos;
      Pred rhs = parse_imply();  // right associative
      return make_expr(ExprKind::Imply, pos, {lhs, rhs});
    }
    return lhs;
  }

  Pred parse_or() {
    Pred lhs = parse_and();
    while (at_kw("or")) {
      Pos pos = next().pos;
      lhs = make_expr(ExprKind::Or, pos, {lhs, parse_and()});
    }
    return lhs;
  }

  Pred parse_and() {
    Pred lhs = parse_atom_pred();
    while (at_op("&")) {
      Pos pos = next().pos;
      lhs = make_expr(ExprKind::And, pos, {lhs, parse_atom_pred()});
    }
    return lhs;
  }

  Pred parse_atom_pred() {
    Pos pos = peek().pos;
    if (at_op("!") || at_op("#")) {
      bool forall = peek().text == "!";
      next();
      std::vector<std::string> binders;
      binders.push_back(expect_ident("bound variable"));
      while (eat_op(",")) binders.push_back(expect_ident("bound variable"));
      expect_op(".");
      expect_op("(");
      Pred body = parse_pred();
      expect_op(")");
      return make_quantifier(forall ? ExprKind::Forall : ExprKind::Exists,
                             std::move(binders), body, pos);
    }
    if (at_kw("not") && peek(1).type == Tok::Op && peek(1).text == "(") {
      next();
      next();
      Pred body = parse_pred();
      expect_op(")");
      return make_expr(ExprKind::Not, pos, {body});
    }
    if (at_kw("partition") && peek(1).type == Tok::Op && peek(1).text == "(") {
      next();
      next();
      std::vector<Expr> args;
      args.push_back(parse_expr());
      while (eat_op(",")) args.push_back(parse_expr());
      expect_op(")");
      return make_expr(ExprKind::Partition, pos, std::move(args));
    }
    if (at_op("(")) {
      // Either a parenthesised predicate or a parenthesised expression that
      // starts a comparison; try the predicate reading first.
      size_t save = idx_;
      try {
        next();
        Pred p = parse_pred();
        expect_op(")");
        if (!starts_expr_continuation()) return p;
      } catch (const ParseError&) {
      }
      idx_ = save;
    }
    Expr lhs = parse_expr();
    return parse_comparison(lhs);
  }

  bool starts_expr_continuation() const {
    if (peek().type != Tok::Op) return false;
    static const char* kCont[] = {
        "|->", "\\/", "\\", "/\\", "**", "<|", "<<|", "|>", "|>>", "[",
        "~", "(", "<->", "-->", "+->", ">+>", "=", "/=", ":", "/:",
        "<:", "<", "<=", ">", ">="};
    for (const char* op : kCont)
      if (peek().text == op) return true;
    return false;
  }

  Pred parse_comparison(Expr lhs) {
    Pos pos = peek().pos;
    ExprKind k;
    if (at_op("=")) k = ExprKind::Eq;
    else if (at_op("/=")) k = ExprKind::Neq;
    else if (at_op(":")) k = ExprKind::In;
    else if (at_op("/:")) k = ExprKind::NotIn;
    else if (at_op("<:")) k = ExprKind::Subset;
    else if (at_op("<")) k = ExprKind::Lt;
    else if (at_op("<=")) k = ExprKind::Le;
    else if (at_op(">")) k = ExprKind::Gt;
    else if (at_op(">=")) k = ExprKind::Ge;
    else fail("expected comparison operator");
    next();
    Expr rhs = parse_expr();
    return make_expr(k, pos, {lhs, rhs});
  }

  // ---- machines and contexts ---------------------------------------------

  bool at_section_kw() const {
    if (peek().type != Tok::Ident) return false;
    const std::string& t = peek().text;
    return t == "machine" || t == "context" || t == "refines" ||
           t == "extends" || t == "sees" || t == "variables" ||
           t == "invariants" || t == "events" || t == "event" || t == "end" ||
           t == "sets" || t == "constants" || t == "axioms" || t == "any" ||
           t == "where" || t == "then";
  }

  std::vector<std::string> parse_ident_list(const char* what) {
    std::vector<std::string> names;
    while (peek().type == Tok::Ident && !at_section_kw())
      names.push_back(next().text);
    if (names.empty()) fail(std::string("expected at least one ") + what);
    return names;
  }

  std::vector<Labeled> parse_labeled_preds(const std::string& container) {
    std::vector<Labeled> out;
    while (peek().type == Tok::Label) {
      Pos pos = peek().pos;
      std::string label = next().text;
      for (const auto& prev : out)
        if (prev.label == label)
          report("E_DUP_LABEL",
                 "duplicate label '" + label + "' in " + container, pos, label);
      Pred p = parse_pred();
      out.push_back({label, p});
    }
    if (out.empty()) fail("expected at least one labelled predicate");
    return out;
  }

  std::vector<Action> parse_actions() {
    std::vector<Action> out;
    while (peek().type == Tok::Label) {
      Action a;
      a.pos = peek().pos;
      a.label = next().text;
      for (const auto& prev : out)
        if (prev.label == a.label)
          report("E_DUP_LABEL", "duplicate action label '" + a.label + "'",
                 a.pos, a.label);
      a.variable = expect_ident("assigned variable");
      if (eat_op("(")) {
        a.index = parse_expr();
        expect_op(")");
      }
      expect_op(":=");
      a.rhs = parse_expr();
      for (const auto& prev : out)
        if (prev.variable == a.variable)
          report("E_DUP_ASSIGN",
                 "variable '" + a.variable + "' assigned twice in one event",
                 a.pos, a.label);
      out.push_back(std::move(a));
    }
    if (out.empty()) fail("expected at least one action");
    return out;
  }

  Event parse_event() {
    Event ev;
    ev.pos = peek().pos;
    if (!eat_kw("event")) fail("expected 'event'");
    ev.name = expect_ident("event name");
    if (eat_kw("extends")) {
      ev.kind = EventKind::Extends;
      ev.parent = expect_ident("parent event name");
    } else if (eat_kw("refines")) {
      ev.kind = EventKind::Refines;
      ev.parent = expect_ident("parent event name");
    }
    if (eat_kw("any")) {
      ev.params = parse_ident_list("event parameter");
      for (size_t i = 0; i < ev.params.size(); i++)
        for (size_t j = i + 1; j < ev.params.size(); j++)
          if (ev.params[i] == ev.params[j])
            report("E_DUP_PARAM", "duplicate parameter '" + ev.params[i] +
                                      "' in event " + ev.name,
                   ev.pos);
      if (!eat_kw("where")) fail("expected 'where' after parameters");
      ev.guards = parse_labeled_preds("event " + ev.name);
    } else if (eat_kw("where")) {
      ev.guards = parse_labeled_preds("event " + ev.name);
    }
    if (eat_kw("then")) ev.actions = parse_actions();
    if (!eat_kw("end")) fail("expected 'end' to close event " + ev.name);
    return ev;
  }

  Machine parse_machine_body() {
    Machine m;
    m.pos = peek().pos;
    if (!eat_kw("machine")) fail("expected 'machine'");
    m.name = expect_ident("machine name");
    if (eat_kw("refines")) m.refines = expect_ident("refined machine name");
    if (eat_kw("sees")) m.sees = parse_ident_list("context name");
    if (eat_kw("variables")) {
      m.variables = parse_ident_list("variable");
      for (size_t i = 0; i < m.variables.size(); i++)
        for (size_t j = i + 1; j < m.variables.size(); j++)
          if (m.variables[i] == m.variables[j])
            report("E_DUP_VARIABLE",
                   "duplicate variable '" + m.variables[i] + "'", m.pos);
    }
    if (eat_kw("invariants")) m.invariants = parse_labeled_preds("invariants");
    if (!eat_kw("events")) fail("expected 'events'");
    while (at_kw("event")) {
      Event ev = parse_event();
      if (m.find_event(ev.name))
        report("E_DUP_EVENT", "duplicate event name '" + ev.name + "'", ev.pos);
      m.events.push_back(std::move(ev));
    }
    if (!eat_kw("end")) fail("expected 'end' to close the machine");
    if (peek().type != Tok::End) fail("trailing input after machine");
    if (!m.find_event(kInitEvent))
      report("E_NO_INIT", "machine has no INITIALISATION event", m.pos);
    return m;
  }

  Context parse_context_body() {
    Context c;
    c.pos = peek().pos;
    if (!eat_kw("context")) fail("expected 'context'");
    c.name = expect_ident("context name");
    if (eat_kw("extends")) c.extends = expect_ident("extended context name");
    if (eat_kw("sets")) c.sets = parse_ident_list("set name");
    if (eat_kw("constants")) {
      c.constants = parse_ident_list("constant");
      for (size_t i = 0; i < c.constants.size(); i++)
        for (size_t j = i + 1; j < c.constants.size(); j++)
          if (c.constants[i] == c.constants[j])
            report("E_DUP_CONSTANT",
                   "duplicate constant '" + c.constants[i] + "'", c.pos);
    }
    if (eat_kw("axioms")) c.axioms = parse_labeled_preds("axioms");
    if (!eat_kw("end")) fail("expected 'end' to close the context");
    if (peek().type != Tok::End) fail("trailing input after context");
    return c;
  }

 private:
  std::vector<Token> toks_;
  Diagnostics& diags_;
  size_t idx_ = 0;
};

}  // namespace detail

inline bool has_errors(const Diagnostics& diags) {
  for (const auto& d : diags)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

inline std::optional<Machine> parse_machine(const std::string& text,
                                            Diagnostics& diags) {
  auto toks = lex(text, diags);
  if (has_errors(diags)) return std::nullopt;
  detail::Parser p(std::move(toks), diags);
  try {
    Machine m = p.parse_machine_body();
    if (has_errors(diags)) return std::nullopt;
    return m;
  } catch (const detail::ParseError& e) {
    diags.push_back(e.diag);
    return std::nullopt;
  }
}

inline std::optional<Context> parse_context(const std::string& text,
                                            Diagnostics& diags) {
  auto toks = lex(text, diags);
  if (has_errors(diags)) return std::nullopt;
  detail::Parser p(std::move(toks), diags);
  try {
    Context c = p.parse_context_body();
    if (has_errors(diags)) return std::nullopt;
    return c;
  } catch (const detail::ParseError& e) {
    diags.push_back(e.diag);
    return std::nullopt;
  }
}

// Parses a standalone expression or predicate (glue maps, SPRJ parameters,
// trace postconditions). Throws vok::Error on syntax errors.
inline Expr parse_expression_text(const std::string& text) {
  Diagnostics diags;
  auto toks = lex(text, diags);
  if (has_errors(diags)) throw Error("E_SYNTAX", diags.front().message);
  detail::Parser p(std::move(toks), diags);
  try {
    Expr e = p.parse_expr();
    if (p.peek().type != Tok::End) p.fail("trailing input after expression");
    return e;
  } catch (const detail::ParseError& e) {
    throw Error("E_SYNTAX", e.diag.message + " in \"" + text + "\"");
  }
}

inline Pred parse_predicate_text(const std::string& text) {
  Diagnostics diags;
  auto toks = lex(text, diags);
  if (has_errors(diags)) throw Error("E_SYNTAX", diags.front().message);
  detail::Parser p(std::move(toks), diags);
  try {
    Pred e = p.parse_pred();
    if (p.peek().type != Tok::End) p.fail("trailing input after predicate");
    return e;
  } catch (const detail::ParseError& e) {
    throw Error("E_SYNTAX", e.diag.message + " in \"" + text + "\"");
  }
}

}  // namespace vok
