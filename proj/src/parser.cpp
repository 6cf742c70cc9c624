#include "stipula/parser.hpp"

#include <algorithm>

#include "lexer.hpp"

namespace stipula {

using detail::Tok;
using detail::Token;

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ContractAst contract() {
    ContractAst c;
    c.pos = cur().pos;
    expect_keyword("stipula");
    c.name = expect(Tok::Ident).text;
    expect(Tok::LBrace);
    if (accept_keyword("asset")) c.assets = optional_idents();
    skip_semis();
    if (accept_keyword("field")) c.fields = optional_idents();
    skip_semis();
    agreement(c);
    parties_ = c.parties;
    skip_semis();
    while (!at(Tok::RBrace)) {
      c.clauses.push_back(function_clause());
      skip_semis();
    }
    expect(Tok::RBrace);
    if (!at(Tok::End)) fail("end of input");
    number_events(c);
    return c;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
  int next_event_ = 1;
  std::vector<std::string> parties_;

  const Token& cur() const { return toks_[i_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_keyword(std::string_view kw) const { return at(Tok::Keyword) && cur().text == kw; }

  [[noreturn]] void fail(std::string_view expected) const {
    std::string got = at(Tok::End) ? "end of input" : "'" + cur().text + "'";
    throw SyntaxError("expected " + std::string(expected) + ", found " + got, cur().pos);
  }

  Token expect(Tok k) {
    if (!at(k)) fail(detail::describe(k));
    return toks_[i_++];
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++i_;
    return true;
  }
  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail("'" + std::string(kw) + "'");
    ++i_;
  }
  bool accept_keyword(std::string_view kw) {
    if (!at_keyword(kw)) return false;
    ++i_;
    return true;
  }
  void skip_semis() {
    while (accept(Tok::Semi)) {
    }
  }

  std::vector<std::string> idents() {
    std::vector<std::string> out{expect(Tok::Ident).text};
    while (accept(Tok::Comma)) out.push_back(expect(Tok::Ident).text);
    return out;
  }
  std::vector<std::string> optional_idents() {
    if (!at(Tok::Ident)) return {};
    return idents();
  }

  void agreement(ContractAst& c) {
    c.agreement.pos = cur().pos;
    expect_keyword("agreement");
    expect(Tok::LParen);
    c.parties = idents();
    expect(Tok::RParen);
    if (accept(Tok::LParen)) {
      c.agreement.header_fields = optional_idents();
      expect(Tok::RParen);
    }
    expect(Tok::LBrace);
    skip_semis();
    while (at(Tok::Ident)) {
      AgreementBinding b;
      b.pos = cur().pos;
      b.parties = idents();
      expect(Tok::Colon);
      b.fields = idents();
      c.agreement.bindings.push_back(std::move(b));
      skip_semis();
    }
    expect(Tok::RBrace);
    expect(Tok::Goto);
    c.agreement.initial_state = expect(Tok::State).text;
  }

  FunctionClause function_clause() {
    FunctionClause f;
    f.pos = cur().pos;
    f.source_state = expect(Tok::State).text;
    f.party = expect(Tok::Ident).text;
    expect(Tok::Colon);
    f.name = expect(Tok::Ident).text;
    expect(Tok::LParen);
    f.value_params = optional_idents();
    expect(Tok::RParen);
    expect(Tok::LBracket);
    f.asset_params = optional_idents();
    expect(Tok::RBracket);
    if (accept(Tok::LParen)) {
      f.guard = expression();
      expect(Tok::RParen);
    }
    expect(Tok::LBrace);
    f.body = statements();
    while (at_keyword("now")) {
      f.events.push_back(event_clause());
      skip_semis();
    }
    if (!at(Tok::RBrace)) fail("'}' or event ('now + k >> @Q')");
    expect(Tok::RBrace);
    expect(Tok::Goto);
    f.target_state = expect(Tok::State).text;
    return f;
  }

  EventClause event_clause() {
    EventClause e;
    e.pos = cur().pos;
    expect_keyword("now");
    expect(Tok::Plus);
    if (at(Tok::Int)) {
      e.delay.value = toks_[i_++].value;
    } else if (at(Tok::Ident)) {
      e.delay.value = toks_[i_++].text;
    } else {
      fail("integer or field name");
    }
    expect(Tok::Schedule);
    e.trigger_state = expect(Tok::State).text;
    expect(Tok::LBrace);
    e.body = statements();
    expect(Tok::RBrace);
    expect(Tok::Goto);
    e.target_state = expect(Tok::State).text;
    e.event_index = next_event_++;  // textual order; renumbered by number_events
    return e;
  }

  // Statements up to a closing brace or the first event.
  Block statements() {
    Block out;
    skip_semis();
    while (!at(Tok::RBrace) && !at_keyword("now") && !at(Tok::End)) {
      out.push_back(statement());
      skip_semis();
    }
    return out;
  }

  Block braced_block() {
    expect(Tok::LBrace);
    Block b = statements();
    if (at_keyword("now")) throw SyntaxError("events are only allowed at clause level", cur().pos);
    expect(Tok::RBrace);
    return b;
  }

  Statement statement() {
    SourcePos pos = cur().pos;
    if (accept_keyword("if")) {
      Conditional c;
      expect(Tok::LParen);
      c.cond = expression();
      expect(Tok::RParen);
      c.then_branch = braced_block();
      if (accept_keyword("else")) {
        if (at_keyword("if")) {
          c.else_branch = Block{statement()};
        } else {
          c.else_branch = braced_block();
        }
      }
      return Statement{std::move(c), pos};
    }
    ExprPtr value = expression();
    if (accept(Tok::Send)) {
      std::string target = expect(Tok::Ident).text;
      if (std::find(parties_.begin(), parties_.end(), target) != parties_.end())
        return Statement{PartySend{value, target}, pos};
      return Statement{FieldSend{value, target}, pos};
    }
    if (accept(Tok::Lolli)) {
      std::string first = expect(Tok::Ident).text;
      if (accept(Tok::Comma)) {
        std::string to = expect(Tok::Ident).text;
        return Statement{AssetMove{value, first, to, false}, pos};
      }
      const std::string* src = as_name(*value);
      if (!src) throw SyntaxError("shorthand 'h -o X' needs an asset name on the left", pos);
      return Statement{AssetMove{value, *src, first, true}, pos};
    }
    fail("'->' or '-o'");
  }

  // Events are numbered by the first appearance of their trigger state along
  // the function clauses (source, then target, in declaration order); events
  // sharing a trigger keep their textual order.
  static void number_events(ContractAst& c) {
    std::vector<std::string> order{c.agreement.initial_state};
    auto see = [&](const std::string& s) {
      if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
    };
    for (const auto& f : c.clauses) {
      see(f.source_state);
      see(f.target_state);
    }
    std::vector<EventClause*> evs;
    for (auto& f : c.clauses)
      for (auto& e : f.events) evs.push_back(&e);
    auto rank = [&](const EventClause* e) {
      return static_cast<std::size_t>(std::find(order.begin(), order.end(), e->trigger_state) - order.begin());
    };
    std::stable_sort(evs.begin(), evs.end(), [&](const EventClause* a, const EventClause* b) {
      return rank(a) < rank(b);
    });
    for (std::size_t i = 0; i < evs.size(); ++i) evs[i]->event_index = static_cast<int>(i + 1);
  }

  // Precedence climbing; levels from loosest to tightest.
  ExprPtr expression() { return binary(0); }

  static int level(Tok k) {
    switch (k) {
      case Tok::OrOr: return 0;
      case Tok::AndAnd: return 1;
      case Tok::Eq: case Tok::Ne: return 2;
      case Tok::Lt: case Tok::Le: case Tok::Gt: case Tok::Ge: return 3;
      case Tok::Plus: case Tok::Minus: return 4;
      case Tok::Star: case Tok::Slash: return 5;
      default: return -1;
    }
  }

  static BinaryOp op_of(Tok k) {
    switch (k) {
      case Tok::OrOr: return BinaryOp::Or;
      case Tok::AndAnd: return BinaryOp::And;
      case Tok::Eq: return BinaryOp::Eq;
      case Tok::Ne: return BinaryOp::Ne;
      case Tok::Lt: return BinaryOp::Lt;
      case Tok::Le: return BinaryOp::Le;
      case Tok::Gt: return BinaryOp::Gt;
      case Tok::Ge: return BinaryOp::Ge;
      case Tok::Plus: return BinaryOp::Add;
      case Tok::Minus: return BinaryOp::Sub;
      case Tok::Star: return BinaryOp::Mul;
      default: return BinaryOp::Div;
    }
  }

  ExprPtr binary(int min_level) {
    ExprPtr lhs = unary();
    for (;;) {
      int lv = level(cur().kind);
      if (lv < min_level) return lhs;
      Token op = toks_[i_++];
      ExprPtr rhs = binary(lv + 1);
      lhs = make_binary(op_of(op.kind), lhs, rhs, op.pos);
    }
  }

  ExprPtr unary() {
    SourcePos pos = cur().pos;
    if (accept(Tok::Bang)) return make_unary(UnaryOp::Not, unary(), pos);
    if (accept(Tok::Minus)) return make_unary(UnaryOp::Neg, unary(), pos);
    return primary();
  }

  ExprPtr primary() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Int: ++i_; return make_int(t.value, t.pos);
      case Tok::String: ++i_; return make_string(t.text, t.pos);
      case Tok::Ident: ++i_; return make_name(t.text, t.pos);
      case Tok::LParen: {
        ++i_;
        ExprPtr e = expression();
        expect(Tok::RParen);
        return e;
      }
      case Tok::Keyword:
        if (t.text == "true" || t.text == "false") {
          ++i_;
          return make_bool(t.text == "true", t.pos);
        }
        break;
      default: break;
    }
    fail("expression");
  }
};

}  // namespace

ContractAst parse_contract(std::string_view source) {
  ContractAst ast = Parser(detail::lex(source)).contract();
  check_contract(ast);
  return ast;
}

ContractAst load_contract(std::string_view source) { return canonicalize(parse_contract(source)); }

}  // namespace stipula
