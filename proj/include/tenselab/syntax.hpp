#pragma once

/**
 * @file syntax.hpp
 * @brief Formulas of the bimodal tense language: AST, parser, printer, substitution.
 *
 * The language has propositional variables, the constants top/bot, the
 * connectives ~ & | -> <-> and four unary modalities F G P H (also written
 * dia box bdia bbox). Formulas are immutable and share structure.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tenselab {

enum class Connective : std::uint8_t {
  Var,
  Top,
  Bot,
  Not,
  And,
  Or,
  Imp,
  Iff,
  Dia,   // F
  Box,   // G
  BDia,  // P
  BBox,  // H
};

constexpr bool is_unary(Connective c) {
  return c == Connective::Not || c == Connective::Dia || c == Connective::Box ||
         c == Connective::BDia || c == Connective::BBox;
}

constexpr bool is_binary(Connective c) {
  return c == Connective::And || c == Connective::Or || c == Connective::Imp ||
         c == Connective::Iff;
}

constexpr bool is_modal(Connective c) {
  return c == Connective::Dia || c == Connective::Box || c == Connective::BDia ||
         c == Connective::BBox;
}

class Formula {
 public:
  /// Empty handle; only useful as a placeholder before assignment.
  Formula() = default;

  static Formula var(std::string name);
  static Formula top();
  static Formula bot();
  static Formula negation(Formula a) { return unary(Connective::Not, std::move(a)); }
  static Formula conj(Formula a, Formula b) { return binary(Connective::And, std::move(a), std::move(b)); }
  static Formula disj(Formula a, Formula b) { return binary(Connective::Or, std::move(a), std::move(b)); }
  static Formula implies(Formula a, Formula b) { return binary(Connective::Imp, std::move(a), std::move(b)); }
  static Formula iff(Formula a, Formula b) { return binary(Connective::Iff, std::move(a), std::move(b)); }
  static Formula dia(Formula a) { return unary(Connective::Dia, std::move(a)); }
  static Formula box(Formula a) { return unary(Connective::Box, std::move(a)); }
  static Formula bdia(Formula a) { return unary(Connective::BDia, std::move(a)); }
  static Formula bbox(Formula a) { return unary(Connective::BBox, std::move(a)); }
  static Formula unary(Connective op, Formula a);
  static Formula binary(Connective op, Formula a, Formula b);

  bool empty() const { return !node_; }
  Connective kind() const;
  const std::string& name() const;
  const Formula& operand() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  std::size_t hash() const;
  std::size_t size() const;
  bool has_modality() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Connective kind, std::string name, Formula l, Formula r);

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Connective kind;
  std::string name;
  Formula left;
  Formula right;
  std::size_t hash;
  std::size_t size;
  bool modal;
};

inline Connective Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }
inline const Formula& Formula::operand() const { return node_->left; }
inline const Formula& Formula::lhs() const { return node_->left; }
inline const Formula& Formula::rhs() const { return node_->right; }
inline std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }
inline std::size_t Formula::size() const { return node_ ? node_->size : 0; }
inline bool Formula::has_modality() const { return node_ && node_->modal; }

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const Formula::Node& x = *a.node_;
  const Formula::Node& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.size != y.size) return false;
  if (x.kind == Connective::Var) return x.name == y.name;
  return x.left == y.left && x.right == y.right;
}

inline Formula Formula::make(Connective kind, std::string name, Formula l, Formula r) {
  std::size_t h = std::hash<std::string>{}(name) * 31u + static_cast<std::size_t>(kind) + 0x9e3779b9u;
  h ^= l.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  h ^= r.hash() * 1099511628211ull + (h << 7) + (h >> 3);
  const std::size_t sz = 1 + l.size() + r.size();
  const bool modal = is_modal(kind) || l.has_modality() || r.has_modality();
  return Formula(std::make_shared<const Node>(
      Node{kind, std::move(name), std::move(l), std::move(r), h, sz, modal}));
}

inline Formula Formula::var(std::string name) {
  return make(Connective::Var, std::move(name), Formula(), Formula());
}

inline Formula Formula::top() {
  static const Formula t = make(Connective::Top, {}, Formula(), Formula());
  return t;
}

inline Formula Formula::bot() {
  static const Formula b = make(Connective::Bot, {}, Formula(), Formula());
  return b;
}

inline Formula Formula::unary(Connective op, Formula a) {
  if (!is_unary(op)) throw std::invalid_argument("Formula::unary: not a unary connective");
  if (a.empty()) throw std::invalid_argument("Formula::unary: empty operand");
  return make(op, {}, std::move(a), Formula());
}

inline Formula Formula::binary(Connective op, Formula a, Formula b) {
  if (!is_binary(op)) throw std::invalid_argument("Formula::binary: not a binary connective");
  if (a.empty() || b.empty()) throw std::invalid_argument("Formula::binary: empty operand");
  return make(op, {}, std::move(a), std::move(b));
}

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

using Substitution = std::map<std::string, Formula>;

// ---------------------------------------------------------------------------
// Lexing and parsing
// ---------------------------------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Lex, Syntax, ReservedWord };

  ParseError(Kind kind, std::size_t position, std::string message,
             std::vector<std::string> expected = {})
      : std::runtime_error(format(kind, position, message)),
        kind_(kind),
        position_(position),
        detail_(std::move(message)),
        expected_(std::move(expected)) {}

  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }
  const std::string& detail() const { return detail_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(Kind kind, std::size_t pos, const std::string& msg) {
    const char* label = kind == Kind::Lex ? "lex error" : kind == Kind::Syntax ? "parse error" : "reserved word";
    return std::string(label) + " at " + std::to_string(pos) + ": " + msg;
  }

  Kind kind_;
  std::size_t position_;
  std::string detail_;
  std::vector<std::string> expected_;
};

struct ParseOptions {
  /// Accept single uppercase letters other than F, G, P, H (optionally
  /// followed by digits) as schematic metavariables.
  bool allow_metavariables = false;
};

inline bool is_reserved_word(std::string_view w) {
  return w == "top" || w == "bot" || w == "dia" || w == "box" || w == "bdia" || w == "bbox";
}

inline bool is_operator_letter(char c) { return c == 'F' || c == 'G' || c == 'P' || c == 'H'; }

inline bool is_metavariable_name(std::string_view w) {
  if (w.empty() || w[0] < 'A' || w[0] > 'Z' || is_operator_letter(w[0])) return false;
  return std::all_of(w.begin() + 1, w.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline bool is_variable_name(std::string_view w) {
  if (w.empty() || w[0] < 'a' || w[0] > 'z') return false;
  for (char c : w) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return !is_reserved_word(w);
}

/// Throws ParseError unless `name` is a legal variable (or metavariable when allowed).
inline void validate_variable_name(std::string_view name, bool allow_metavariables = false) {
  if (is_variable_name(name)) return;
  if (allow_metavariables && is_metavariable_name(name)) return;
  if (is_reserved_word(name)) {
    throw ParseError(ParseError::Kind::ReservedWord, 0,
                     "'" + std::string(name) + "' is reserved and cannot name a variable");
  }
  throw ParseError(ParseError::Kind::Lex, 0, "'" + std::string(name) + "' is not a variable name");
}

namespace detail {

enum class Tok : std::uint8_t {
  Var, Meta, Top, Bot, Not, Dia, Box, BDia, BBox, And, Or, Imp, Iff, LParen, RParen, End
};

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::Var: return "variable";
    case Tok::Meta: return "metavariable";
    case Tok::Top: return "'top'";
    case Tok::Bot: return "'bot'";
    case Tok::Not: return "'~'";
    case Tok::Dia: return "'F'";
    case Tok::Box: return "'G'";
    case Tok::BDia: return "'P'";
    case Tok::BBox: return "'H'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Imp: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of input";
  }
  return "?";
}

// UTF-8 spellings accepted as aliases of the ASCII operators.
struct Alias {
  std::string_view bytes;
  Tok tok;
};

inline constexpr Alias kUnicodeAliases[] = {
    {"\xC2\xAC", Tok::Not},          // ¬
    {"\xE2\x88\xA7", Tok::And},      // ∧
    {"\xE2\x88\xA8", Tok::Or},       // ∨
    {"\xE2\x86\x92", Tok::Imp},      // →
    {"\xE2\x86\x94", Tok::Iff},      // ↔
    {"\xE2\x97\x87", Tok::Dia},      // ◇
    {"\xE2\x96\xA1", Tok::Box},      // □
    {"\xE2\xA7\xAB", Tok::BDia},     // ⧫
    {"\xE2\x96\xA0", Tok::BBox},     // ■
    {"\xE2\x8A\xA4", Tok::Top},      // ⊤
    {"\xE2\x8A\xA5", Tok::Bot},      // ⊥
};

inline std::vector<Token> lex(std::string_view s, const ParseOptions& opt) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (c >= 'a' && c <= 'z') {
      std::size_t j = i + 1;
      while (j < s.size() && ((s[j] >= 'a' && s[j] <= 'z') || (s[j] >= 'A' && s[j] <= 'Z') ||
                              (s[j] >= '0' && s[j] <= '9') || s[j] == '_')) {
        ++j;
      }
      std::string word(s.substr(i, j - i));
      Tok kind = Tok::Var;
      if (word == "top") kind = Tok::Top;
      else if (word == "bot") kind = Tok::Bot;
      else if (word == "dia") kind = Tok::Dia;
      else if (word == "box") kind = Tok::Box;
      else if (word == "bdia") kind = Tok::BDia;
      else if (word == "bbox") kind = Tok::BBox;
      out.push_back({kind, start, std::move(word)});
      i = j;
      continue;
    }
    if (c >= 'A' && c <= 'Z') {
      if (c == 'F') out.push_back({Tok::Dia, start, "F"});
      else if (c == 'G') out.push_back({Tok::Box, start, "G"});
      else if (c == 'P') out.push_back({Tok::BDia, start, "P"});
      else if (c == 'H') out.push_back({Tok::BBox, start, "H"});
      else if (opt.allow_metavariables) {
        std::size_t j = i + 1;
        while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
        out.push_back({Tok::Meta, start, std::string(s.substr(i, j - i))});
        i = j;
        continue;
      } else {
        throw ParseError(ParseError::Kind::Lex, start,
                         std::string("unexpected character '") + c +
                             "' (variables start with a lowercase letter)");
      }
      ++i;
      continue;
    }
    switch (c) {
      case '~': out.push_back({Tok::Not, start, "~"}); ++i; continue;
      case '&': out.push_back({Tok::And, start, "&"}); ++i; continue;
      case '|': out.push_back({Tok::Or, start, "|"}); ++i; continue;
      case '(': out.push_back({Tok::LParen, start, "("}); ++i; continue;
      case ')': out.push_back({Tok::RParen, start, ")"}); ++i; continue;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Tok::Imp, start, "->"});
          i += 2;
          continue;
        }
        break;
      case '<':
        if (s.substr(i, 3) == "<->") {
          out.push_back({Tok::Iff, start, "<->"});
          i += 3;
          continue;
        }
        break;
      default: break;
    }
    bool matched = false;
    for (const auto& alias : kUnicodeAliases) {
      if (s.substr(i, alias.bytes.size()) == alias.bytes) {
        out.push_back({alias.tok, start, std::string(alias.bytes)});
        i += alias.bytes.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    throw ParseError(ParseError::Kind::Lex, start, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse() {
    Formula f = parse_iff();
    if (peek().kind != Tok::End) {
      fail({"'&'", "'|'", "'->'", "'<->'", "end of input"});
    }
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string msg = "unexpected " + std::string(describe(t.kind));
    if (t.kind == Tok::Var || t.kind == Tok::Meta) msg += " '" + t.text + "'";
    msg += "; expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    throw ParseError(ParseError::Kind::Syntax, t.pos, msg, std::move(expected));
  }

  Formula parse_iff() {
    Formula l = parse_imp();
    while (peek().kind == Tok::Iff) {
      advance();
      l = Formula::iff(std::move(l), parse_imp());
    }
    return l;
  }

  Formula parse_imp() {
    Formula l = parse_or();
    if (peek().kind == Tok::Imp) {
      advance();
      return Formula::implies(std::move(l), parse_imp());
    }
    return l;
  }

  Formula parse_or() {
    Formula l = parse_and();
    while (peek().kind == Tok::Or) {
      advance();
      l = Formula::disj(std::move(l), parse_and());
    }
    return l;
  }

  Formula parse_and() {
    Formula l = parse_unary();
    while (peek().kind == Tok::And) {
      advance();
      l = Formula::conj(std::move(l), parse_unary());
    }
    return l;
  }

  static bool starts_operand(Tok t) {
    switch (t) {
      case Tok::Var: case Tok::Meta: case Tok::Top: case Tok::Bot: case Tok::Not:
      case Tok::Dia: case Tok::Box: case Tok::BDia: case Tok::BBox: case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  Formula parse_unary() {
    const Token& t = peek();
    Connective op;
    switch (t.kind) {
      case Tok::Not: op = Connective::Not; break;
      case Tok::Dia: op = Connective::Dia; break;
      case Tok::Box: op = Connective::Box; break;
      case Tok::BDia: op = Connective::BDia; break;
      case Tok::BBox: op = Connective::BBox; break;
      default: return parse_atom();
    }
    const Token& op_tok = advance();
    if (!starts_operand(peek().kind) && op_tok.text.size() > 1 && op_tok.text[0] >= 'a' &&
        op_tok.text[0] <= 'z') {
      // "dia", "box", ... used where a variable was intended.
      throw ParseError(ParseError::Kind::ReservedWord, op_tok.pos,
                       "'" + op_tok.text + "' is reserved and cannot name a variable");
    }
    return Formula::unary(op, parse_unary());
  }

  Formula parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var:
      case Tok::Meta:
        return Formula::var(advance().text);
      case Tok::Top:
        advance();
        return Formula::top();
      case Tok::Bot:
        advance();
        return Formula::bot();
      case Tok::LParen: {
        advance();
        Formula f = parse_iff();
        if (peek().kind != Tok::RParen) fail({"')'"});
        advance();
        return f;
      }
      default:
        fail({"variable", "'top'", "'bot'", "'('", "unary operator"});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text, ParseOptions options = {}) {
  return detail::Parser(detail::lex(text, options)).parse();
}

/// Parses with metavariables (A, B, C, ...) enabled; used for axiom schemas and proof scripts.
inline Formula parse_schema(std::string_view text) {
  return parse_formula(text, ParseOptions{.allow_metavariables = true});
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace detail {

inline int precedence(Connective c) {
  switch (c) {
    case Connective::Iff: return 1;
    case Connective::Imp: return 2;
    case Connective::Or: return 3;
    case Connective::And: return 4;
    case Connective::Not: case Connective::Dia: case Connective::Box:
    case Connective::BDia: case Connective::BBox:
      return 5;
    default: return 6;
  }
}

inline void render_into(const Formula& f, std::string& out) {
  const auto wrap = [&out](const Formula& g, bool parens) {
    if (parens) out += '(';
    render_into(g, out);
    if (parens) out += ')';
  };
  switch (f.kind()) {
    case Connective::Var: out += f.name(); return;
    case Connective::Top: out += "top"; return;
    case Connective::Bot: out += "bot"; return;
    case Connective::Not:
      out += '~';
      wrap(f.operand(), precedence(f.operand().kind()) < 5);
      return;
    case Connective::Dia: case Connective::Box: case Connective::BDia: case Connective::BBox: {
      static constexpr const char* kLetters[] = {"F ", "G ", "P ", "H "};
      out += kLetters[static_cast<int>(f.kind()) - static_cast<int>(Connective::Dia)];
      wrap(f.operand(), precedence(f.operand().kind()) < 5);
      return;
    }
    default: break;
  }
  const int p = precedence(f.kind());
  const int pl = precedence(f.lhs().kind());
  const int pr = precedence(f.rhs().kind());
  const bool right_assoc = f.kind() == Connective::Imp;
  wrap(f.lhs(), pl < p || (right_assoc && pl == p));
  switch (f.kind()) {
    case Connective::And: out += " & "; break;
    case Connective::Or: out += " | "; break;
    case Connective::Imp: out += " -> "; break;
    default: out += " <-> "; break;
  }
  wrap(f.rhs(), pr < p || (!right_assoc && pr == p));
}

}  // namespace detail

/// Canonical text with the fewest parentheses the grammar allows.
inline std::string render_formula(const Formula& f) {
  std::string out;
  detail::render_into(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Traversal
// ---------------------------------------------------------------------------

namespace detail {
inline void collect_vars(const Formula& f, std::set<std::string>& acc) {
  if (f.kind() == Connective::Var) {
    acc.insert(f.name());
    return;
  }
  if (!f.lhs().empty()) collect_vars(f.lhs(), acc);
  if (!f.rhs().empty()) collect_vars(f.rhs(), acc);
}
}  // namespace detail

/// Sorted, duplicate-free variable names occurring in `f`.
inline std::vector<std::string> variables_of(const Formula& f) {
  std::set<std::string> acc;
  detail::collect_vars(f, acc);
  return {acc.begin(), acc.end()};
}

inline std::vector<std::string> variables_of(const std::vector<Formula>& fs) {
  std::set<std::string> acc;
  for (const auto& f : fs) detail::collect_vars(f, acc);
  return {acc.begin(), acc.end()};
}

/// Simultaneous substitution; variables without an entry are kept.
inline Formula substitute(const Formula& f, const Substitution& s) {
  switch (f.kind()) {
    case Connective::Var: {
      auto it = s.find(f.name());
      return it == s.end() ? f : it->second;
    }
    case Connective::Top:
    case Connective::Bot:
      return f;
    default:
      break;
  }
  if (is_unary(f.kind())) {
    Formula a = substitute(f.operand(), s);
    return a == f.operand() ? f : Formula::unary(f.kind(), std::move(a));
  }
  Formula l = substitute(f.lhs(), s);
  Formula r = substitute(f.rhs(), s);
  if (l == f.lhs() && r == f.rhs()) return f;
  return Formula::binary(f.kind(), std::move(l), std::move(r));
}

/// One-sided matching: extends `binding` so that substitute(pattern, binding) == target.
/// Every variable of `pattern` is a placeholder.
inline bool match_pattern(const Formula& pattern, const Formula& target, Substitution& binding) {
  if (pattern.kind() == Connective::Var) {
    auto [it, inserted] = binding.emplace(pattern.name(), target);
    return inserted || it->second == target;
  }
  if (pattern.kind() != target.kind()) return false;
  if (pattern.kind() == Connective::Top || pattern.kind() == Connective::Bot) return true;
  if (is_unary(pattern.kind())) return match_pattern(pattern.operand(), target.operand(), binding);
  return match_pattern(pattern.lhs(), target.lhs(), binding) &&
         match_pattern(pattern.rhs(), target.rhs(), binding);
}

// ---------------------------------------------------------------------------
// Compiled form for exhaustive evaluation loops
// ---------------------------------------------------------------------------

/// Postfix program over variable slots; slots follow variables_of order.
struct CompiledFormula {
  struct Instr {
    Connective op;
    std::uint32_t slot;
  };
  std::vector<std::string> variables;
  std::vector<Instr> program;
  std::size_t max_stack = 0;
};

inline CompiledFormula compile(const Formula& f) {
  CompiledFormula out;
  out.variables = variables_of(f);
  std::size_t depth = 0;
  std::function<void(const Formula&)> emit = [&](const Formula& g) {
    if (g.kind() == Connective::Var) {
      const auto it = std::lower_bound(out.variables.begin(), out.variables.end(), g.name());
      out.program.push_back({Connective::Var, static_cast<std::uint32_t>(it - out.variables.begin())});
      out.max_stack = std::max(out.max_stack, ++depth);
      return;
    }
    if (g.kind() == Connective::Top || g.kind() == Connective::Bot) {
      out.program.push_back({g.kind(), 0});
      out.max_stack = std::max(out.max_stack, ++depth);
      return;
    }
    if (is_unary(g.kind())) {
      emit(g.operand());
      out.program.push_back({g.kind(), 0});
      return;
    }
    emit(g.lhs());
    emit(g.rhs());
    out.program.push_back({g.kind(), 0});
    --depth;
  };
  emit(f);
  return out;
}

}  // namespace tenselab
