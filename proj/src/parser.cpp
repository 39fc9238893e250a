#include <cctype>

#include "wms/logic.hpp"

namespace wms::logic {

namespace {

enum class tok : u8 {
  ident, num, lparen, rparen, comma, dot, hash, eq, neq,
  bang, amp, pipe, arrow, darrow, end
};

struct token {
  tok kind;
  std::string text;
  std::size_t pos;
};

[[noreturn]] void syntax(std::size_t pos, const std::string& what) {
  fail(errc::syntax_error, what + " at position " + std::to_string(pos));
}

std::vector<token> lex(const std::string& s) {
  std::vector<token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
      out.push_back({tok::ident, s.substr(start, i - start), start});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({tok::num, s.substr(start, i - start), start});
    } else if (c == '<' && s.compare(i, 3, "<->") == 0) {
      out.push_back({tok::darrow, "<->", start});
      i += 3;
    } else if (c == '-' && s.compare(i, 2, "->") == 0) {
      out.push_back({tok::arrow, "->", start});
      i += 2;
    } else if (c == '!' && i + 1 < s.size() && s[i + 1] == '=') {
      out.push_back({tok::neq, "!=", start});
      i += 2;
    } else {
      tok k;
      switch (c) {
        case '(': k = tok::lparen; break;
        case ')': k = tok::rparen; break;
        case ',': k = tok::comma; break;
        case '.': k = tok::dot; break;
        case '#': k = tok::hash; break;
        case '=': k = tok::eq; break;
        case '!': k = tok::bang; break;
        case '&': k = tok::amp; break;
        case '|': k = tok::pipe; break;
        default: syntax(start, std::string("unexpected character '") + c + "'");
      }
      out.push_back({k, s.substr(i, 1), start});
      ++i;
    }
  }
  out.push_back({tok::end, "", s.size()});
  return out;
}

struct parser {
  const std::vector<token>& ts;
  const signature& sig;
  std::size_t at = 0;

  const token& peek() const { return ts[at]; }
  token next() { return ts[at++]; }
  bool accept(tok k) {
    if (ts[at].kind == k) {
      ++at;
      return true;
    }
    return false;
  }
  token expect(tok k, const char* what) {
    if (ts[at].kind != k) syntax(ts[at].pos, std::string("expected ") + what);
    return ts[at++];
  }

  static formula_ptr mk(formula f) { return std::make_shared<formula>(std::move(f)); }

  formula_ptr parse_iff() {
    std::vector<formula_ptr> parts{parse_imp()};
    while (accept(tok::darrow)) parts.push_back(parse_imp());
    formula_ptr r = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) {
      formula f;
      f.kind = fkind::iff;
      f.sub = {parts[i], r};
      r = mk(std::move(f));
    }
    return r;
  }

  formula_ptr parse_imp() {
    std::vector<formula_ptr> parts{parse_or()};
    while (accept(tok::arrow)) parts.push_back(parse_or());
    formula_ptr r = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) {
      formula f;
      f.kind = fkind::impl;
      f.sub = {parts[i], r};
      r = mk(std::move(f));
    }
    return r;
  }

  formula_ptr parse_or() {
    formula_ptr r = parse_and();
    while (accept(tok::pipe)) {
      formula f;
      f.kind = fkind::disj;
      f.sub = {r, parse_and()};
      r = mk(std::move(f));
    }
    return r;
  }

  formula_ptr parse_and() {
    formula_ptr r = parse_unary();
    while (accept(tok::amp)) {
      formula f;
      f.kind = fkind::conj;
      f.sub = {r, parse_unary()};
      r = mk(std::move(f));
    }
    return r;
  }

  formula_ptr parse_unary() {
    if (accept(tok::bang)) {
      formula f;
      f.kind = fkind::neg;
      f.sub = {parse_unary()};
      return mk(std::move(f));
    }
    const token& t = peek();
    if (t.kind == tok::ident && (t.text == "exists" || t.text == "forall")) return parse_quant();
    if (accept(tok::lparen)) {
      formula_ptr r = parse_iff();
      expect(tok::rparen, "')'");
      return r;
    }
    return parse_atom();
  }

  formula_ptr parse_quant() {
    token q = next();
    formula f;
    f.kind = q.text == "exists" ? fkind::exists : fkind::forall;
    do {
      token v = expect(tok::ident, "variable name");
      if (v.text == "exists" || v.text == "forall" || v.text == "true" || v.text == "false")
        syntax(v.pos, "keyword used as variable");
      f.bound.push_back(v.text);
    } while (accept(tok::comma));
    expect(tok::dot, "'.'");
    f.sub = {parse_unary()};
    return mk(std::move(f));
  }

  term parse_term() {
    if (accept(tok::hash)) {
      token n = expect(tok::num, "integer literal");
      term t;
      t.is_literal = true;
      unsigned long v = std::stoul(n.text);
      if (v > 0xfffffffful) syntax(n.pos, "literal too large");
      t.value = static_cast<u32>(v);
      return t;
    }
    token v = expect(tok::ident, "term");
    if (v.text == "exists" || v.text == "forall" || v.text == "true" || v.text == "false")
      syntax(v.pos, "keyword used as term");
    term t;
    t.var = v.text;
    return t;
  }

  formula_ptr parse_atom() {
    const token& t = peek();
    if (t.kind == tok::ident && t.text == "true") {
      next();
      formula f;
      f.kind = fkind::verum;
      return mk(std::move(f));
    }
    if (t.kind == tok::ident && t.text == "false") {
      next();
      formula f;
      f.kind = fkind::falsum;
      return mk(std::move(f));
    }
    // Relation application: IDENT "(" ... ")", not a keyword.
    if (t.kind == tok::ident && t.text != "exists" && t.text != "forall" &&
        ts[at + 1].kind == tok::lparen) {
      token name = next();
      next();  // lparen
      formula f;
      f.kind = fkind::rel;
      f.rel_name = name.text;
      f.rel = sig.find(name.text);
      if (f.rel < 0) fail(errc::unknown_relation, "relation '" + name.text + "' not declared");
      do {
        f.args.push_back(parse_term());
      } while (accept(tok::comma));
      expect(tok::rparen, "')'");
      if (f.args.size() != sig.rels[f.rel].arity)
        fail(errc::arity_mismatch, "relation '" + name.text + "' expects " +
                                       std::to_string(sig.rels[f.rel].arity) + " arguments, got " +
                                       std::to_string(f.args.size()));
      return mk(std::move(f));
    }
    // Equality / inequality between terms.
    term lhs = parse_term();
    bool negated;
    if (accept(tok::eq))
      negated = false;
    else if (accept(tok::neq))
      negated = true;
    else
      syntax(peek().pos, "expected '=' or '!='");
    term rhs = parse_term();
    formula eq;
    eq.kind = fkind::eq;
    eq.args = {lhs, rhs};
    if (!negated) return mk(std::move(eq));
    formula f;
    f.kind = fkind::neg;
    f.sub = {mk(std::move(eq))};
    return mk(std::move(f));
  }
};

}  // namespace

int signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < rels.size(); ++i)
    if (rels[i].name == name) return static_cast<int>(i);
  return -1;
}

formula_ptr parse_formula(const std::string& text, const signature& sig) {
  auto tokens = lex(text);
  parser p{tokens, sig};
  formula_ptr f = p.parse_iff();
  if (p.peek().kind != tok::end) syntax(p.peek().pos, "trailing input");
  return f;
}

namespace {
void collect_free(const formula& f, std::vector<std::string>& out,
                  std::vector<std::string>& bound) {
  auto is_bound = [&](const std::string& v) {
    for (const auto& b : bound)
      if (b == v) return true;
    return false;
  };
  switch (f.kind) {
    case fkind::rel:
    case fkind::eq:
      for (const auto& t : f.args) {
        if (t.is_literal || is_bound(t.var)) continue;
        bool seen = false;
        for (const auto& v : out) seen = seen || v == t.var;
        if (!seen) out.push_back(t.var);
      }
      break;
    case fkind::exists:
    case fkind::forall: {
      std::size_t mark = bound.size();
      for (const auto& v : f.bound) bound.push_back(v);
      collect_free(*f.sub[0], out, bound);
      bound.resize(mark);
      break;
    }
    default:
      for (const auto& s : f.sub) collect_free(*s, out, bound);
  }
}
}  // namespace

std::vector<std::string> free_vars(const formula& f) {
  std::vector<std::string> out, bound;
  collect_free(f, out, bound);
  return out;
}

}  // namespace wms::logic
