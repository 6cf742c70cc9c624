#include "lexer.hpp"

#include <array>
#include <cctype>
#include <limits>

namespace stipula::detail {

namespace {

constexpr std::array<std::string_view, 9> kKeywords = {
    "stipula", "asset", "field", "agreement", "if", "else", "now", "true", "false"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Glyph {
  std::string_view utf8;
  Tok kind;
  std::string_view ascii;
};

// Typeset forms accepted alongside the ASCII spelling.
constexpr std::array<Glyph, 4> kGlyphs = {{
    {"\xE2\x8A\xB8", Tok::Lolli, "-o"},     // U+22B8
    {"\xE2\x86\x92", Tok::Send, "->"},      // U+2192
    {"\xE2\x89\xAB", Tok::Schedule, ">>"},  // U+226B
    {"\xE2\x87\x92", Tok::Goto, "=>"},      // U+21D2
}};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      SourcePos pos{line_, col_};
      if (at_end()) {
        out.push_back({Tok::End, "", 0, pos});
        return out;
      }
      out.push_back(next(pos));
    }
  }

 private:
  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;

  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t k = 0) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i_ < src_.size(); ++k, ++i_) {
      char c = src_[i_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  void skip_trivia() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (src_.substr(i_, 3) == "\xEF\xBB\xBF") {
        advance(3);  // BOM
      } else {
        return;
      }
    }
  }

  Token make(Tok k, std::string text, SourcePos pos) { return Token{k, std::move(text), 0, pos}; }

  Token next(SourcePos pos) {
    char c = peek();
    if (is_ident_start(c)) {
      std::size_t start = i_;
      while (!at_end() && is_ident_char(peek())) advance();
      std::string word(src_.substr(start, i_ - start));
      for (auto kw : kKeywords)
        if (word == kw) return make(Tok::Keyword, word, pos);
      return make(Tok::Ident, word, pos);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i_;
      std::int64_t v = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        int d = peek() - '0';
        if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10)
          throw SyntaxError("integer literal out of range", pos);
        v = v * 10 + d;
        advance();
      }
      if (!at_end() && is_ident_start(peek()))
        throw SyntaxError("malformed number", pos);
      Token t = make(Tok::Int, std::string(src_.substr(start, i_ - start)), pos);
      t.value = v;
      return t;
    }
    if (c == '@') {
      advance();
      if (!is_ident_start(peek())) throw SyntaxError("expected state name after '@'", pos);
      std::size_t start = i_;
      while (!at_end() && is_ident_char(peek())) advance();
      return make(Tok::State, std::string(src_.substr(start, i_ - start)), pos);
    }
    if (c == '"') {
      advance();
      std::string text;
      while (!at_end() && peek() != '"') {
        if (peek() == '\n') throw SyntaxError("unterminated string literal", pos);
        if (peek() == '\\' && (peek(1) == '"' || peek(1) == '\\')) advance();
        text.push_back(peek());
        advance();
      }
      if (at_end()) throw SyntaxError("unterminated string literal", pos);
      advance();
      return make(Tok::String, std::move(text), pos);
    }
    for (const auto& g : kGlyphs) {
      if (src_.substr(i_, g.utf8.size()) == g.utf8) {
        advance(g.utf8.size());
        return make(g.kind, std::string(g.ascii), pos);
      }
    }

    auto two = src_.substr(i_, 2);
    struct Pair {
      std::string_view s;
      Tok k;
    };
    static constexpr std::array<Pair, 9> kPairs = {{{"->", Tok::Send},
                                                     {">>", Tok::Schedule},
                                                     {"=>", Tok::Goto},
                                                     {"==", Tok::Eq},
                                                     {"!=", Tok::Ne},
                                                     {"<=", Tok::Le},
                                                     {">=", Tok::Ge},
                                                     {"&&", Tok::AndAnd},
                                                     {"||", Tok::OrOr}}};
    for (const auto& p : kPairs) {
      if (two == p.s) {
        advance(2);
        return make(p.k, std::string(p.s), pos);
      }
    }
    // `-o` only when the `o` does not start a longer identifier.
    if (two == "-o" && !is_ident_char(peek(2))) {
      advance(2);
      return make(Tok::Lolli, "-o", pos);
    }

    Tok k;
    switch (c) {
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case ',': k = Tok::Comma; break;
      case ';': k = Tok::Semi; break;
      case ':': k = Tok::Colon; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      case '!': k = Tok::Bang; break;
      default: {
        std::string shown = (static_cast<unsigned char>(c) < 0x80 && std::isprint(static_cast<unsigned char>(c)))
                                ? std::string(1, c)
                                : "byte 0x" + hex(static_cast<unsigned char>(c));
        throw SyntaxError("unexpected character '" + shown + "'", pos);
      }
    }
    advance();
    return make(k, std::string(1, c), pos);
  }

  static std::string hex(unsigned v) {
    const char* digits = "0123456789ABCDEF";
    return {digits[v >> 4], digits[v & 15]};
  }
};

}  // namespace

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Keyword: return "keyword";
    case Tok::Int: return "integer";
    case Tok::String: return "string";
    case Tok::State: return "state (@Name)";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Send: return "'->'";
    case Tok::Lolli: return "'-o'";
    case Tok::Schedule: return "'>>'";
    case Tok::Goto: return "'=>'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Eq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

}  // namespace stipula::detail
