#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vok {

// Error thrown by evaluation and loading code. `code` is a stable machine
// readable identifier (E_APPLY_UNDEFINED, E_AXIOM_FAILED, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Hereditarily finite value: atom, integer, boolean, pair or finite set.
// Values are immutable after construction; set elements are kept strictly
// increasing under compare(), so structural equality is canonical equality.
class Value {
 public:
  enum class Kind : uint8_t { Atom, Int, Bool, Pair, Set };

  Value() : kind_(Kind::Set), set_(empty_set_rep()) {}

  static Value atom(std::string name) {
    Value v;
    v.kind_ = Kind::Atom;
    v.atom_ = std::move(name);
    v.set_.reset();
    return v;
  }

  static Value integer(long long n) {
    Value v;
    v.kind_ = Kind::Int;
    v.int_ = n;
    v.set_.reset();
    return v;
  }

  static Value boolean(bool b) {
    Value v;
    v.kind_ = Kind::Bool;
    v.int_ = b ? 1 : 0;
    v.set_.reset();
    return v;
  }

  static Value pair(Value left, Value right) {
    Value v;
    v.kind_ = Kind::Pair;
    v.set_.reset();
    v.pair_ = std::make_shared<const std::pair<Value, Value>>(std::move(left),
                                                              std::move(right));
    return v;
  }

  // Builds a set from arbitrary elements: sorts and removes duplicates.
  static Value set(std::vector<Value> elements) {
    normalize(elements);
    return set_normalized(std::move(elements));
  }

  // Caller guarantees `elements` is already strictly increasing.
  static Value set_normalized(std::vector<Value> elements) {
    Value v;
    v.kind_ = Kind::Set;
    v.set_ = std::make_shared<const std::vector<Value>>(std::move(elements));
    return v;
  }

  static Value empty_set() { return Value(); }

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ == Kind::Atom; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_pair() const { return kind_ == Kind::Pair; }
  bool is_set() const { return kind_ == Kind::Set; }

  const std::string& atom_name() const { return atom_; }
  long long int_value() const { return int_; }
  bool bool_value() const { return int_ != 0; }
  const Value& left() const { return pair_->first; }
  const Value& right() const { return pair_->second; }
  const std::vector<Value>& elements() const { return *set_; }
  size_t size() const { return set_->size(); }

  // Total order: Atom < Int < Bool < Pair < Set across kinds, lexicographic
  // within a kind. Sets compare as sequences, so a strict prefix is smaller.
  friend int compare(const Value& a, const Value& b) {
    if (a.kind_ != b.kind_)
      return static_cast<int>(a.kind_) < static_cast<int>(b.kind_) ? -1 : 1;
    switch (a.kind_) {
      case Kind::Atom: {
        int c = a.atom_.compare(b.atom_);
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
      }
      case Kind::Int:
      case Kind::Bool:
        return a.int_ < b.int_ ? -1 : (a.int_ > b.int_ ? 1 : 0);
      case Kind::Pair: {
        if (a.pair_ == b.pair_) return 0;
        int c = compare(a.left(), b.left());
        if (c != 0) return c;
        return compare(a.right(), b.right());
      }
      case Kind::Set: {
        if (a.set_ == b.set_) return 0;
        const auto& xs = *a.set_;
        const auto& ys = *b.set_;
        size_t n = std::min(xs.size(), ys.size());
        for (size_t i = 0; i < n; i++) {
          int c = compare(xs[i], ys[i]);
          if (c != 0) return c;
        }
        if (xs.size() == ys.size()) return 0;
        return xs.size() < ys.size() ? -1 : 1;
      }
    }
    return 0;
  }

  friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
  friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

  bool contains(const Value& x) const {
    const auto& xs = *set_;
    size_t lo = 0, hi = xs.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      int c = compare(xs[mid], x);
      if (c == 0) return true;
      if (c < 0) lo = mid + 1; else hi = mid;
    }
    return false;
  }

  static void normalize(std::vector<Value>& elements) {
    std::sort(elements.begin(), elements.end(),
              [](const Value& x, const Value& y) { return compare(x, y) < 0; });
    elements.erase(std::unique(elements.begin(), elements.end(),
                               [](const Value& x, const Value& y) {
                                 return compare(x, y) == 0;
                               }),
                   elements.end());
  }

 private:
  static std::shared_ptr<const std::vector<Value>> empty_set_rep() {
    static const auto rep = std::make_shared<const std::vector<Value>>();
    return rep;
  }

  Kind kind_;
  long long int_ = 0;
  std::string atom_;
  std::shared_ptr<const std::pair<Value, Value>> pair_;
  std::shared_ptr<const std::vector<Value>> set_;
};

// Round-trippable surface syntax. Sets print in canonical order; maplets are
// left-associative, so only right-nested pairs need parentheses.
inline void render_to(const Value& v, std::string& out) {
  switch (v.kind()) {
    case Value::Kind::Atom:
      out += v.atom_name();
      break;
    case Value::Kind::Int:
      out += std::to_string(v.int_value());
      break;
    case Value::Kind::Bool:
      out += v.bool_value() ? "TRUE" : "FALSE";
      break;
    case Value::Kind::Pair:
      render_to(v.left(), out);
      out += " |-> ";
      if (v.right().is_pair()) {
        out += '(';
        render_to(v.right(), out);
        out += ')';
      } else {
        render_to(v.right(), out);
      }
      break;
    case Value::Kind::Set: {
      out += '{';
      bool first = true;
      for (const auto& e : v.elements()) {
        if (!first) out += ", ";
        first = false;
        render_to(e, out);
      }
      out += '}';
      break;
    }
  }
}

inline std::string render(const Value& v) {
  std::string out;
  render_to(v, out);
  return out;
}

namespace detail {

struct ValueParser {
  const std::string& text;
  size_t pos = 0;

  explicit ValueParser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) pos++;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw Error("E_VALUE_SYNTAX", msg + " at offset " + std::to_string(pos) +
                                     " in \"" + text + "\"");
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      pos++;
      return true;
    }
    return false;
  }

  Value parse_primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of value");
    char c = text[pos];
    if (c == '{') {
      pos++;
      std::vector<Value> elems;
      skip_ws();
      if (!eat('}')) {
        for (;;) {
          elems.push_back(parse_value());
          if (eat('}')) break;
          if (!eat(',')) fail("expected ',' or '}'");
        }
      }
      return Value::set(std::move(elems));
    }
    if (c == '(') {
      pos++;
      Value v = parse_value();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (c == '-' || (c >= '0' && c <= '9')) {
      size_t start = pos;
      if (c == '-') pos++;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') pos++;
      if (pos == start + (c == '-' ? 1u : 0u)) fail("malformed integer");
      return Value::integer(std::stoll(text.substr(start, pos - start)));
    }
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < text.size() &&
             (isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        pos++;
      std::string name = text.substr(start, pos - start);
      if (name == "TRUE") return Value::boolean(true);
      if (name == "FALSE") return Value::boolean(false);
      return Value::atom(std::move(name));
    }
    fail("unexpected character");
  }

  Value parse_value() {
    Value v = parse_primary();
    for (;;) {
      skip_ws();
      if (pos + 2 < text.size() && text.compare(pos, 3, "|->") == 0) {
        pos += 3;
        Value rhs = parse_primary();
        v = Value::pair(std::move(v), std::move(rhs));
      } else {
        break;
      }
    }
    return v;
  }
};

}  // namespace detail

// Parses the output of render(). Bare identifiers become atoms.
inline Value parse_value(const std::string& text) {
  detail::ValueParser p(text);
  Value v = p.parse_value();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return v;
}

}  // namespace vok
