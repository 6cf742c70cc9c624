#include <sstream>

#include "stipula/parser.hpp"

namespace stipula {

namespace {

int level(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 0;
    case BinaryOp::And: return 1;
    case BinaryOp::Eq: case BinaryOp::Ne: return 2;
    case BinaryOp::Lt: case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge: return 3;
    case BinaryOp::Add: case BinaryOp::Sub: return 4;
    case BinaryOp::Mul: case BinaryOp::Div: return 5;
  }
  return 0;
}

constexpr int kAtom = 7;

int level(const Expr& e) {
  if (const auto* b = std::get_if<BinaryExpr>(&e.node)) return level(b->op);
  if (std::holds_alternative<UnaryExpr>(e.node)) return 6;
  return kAtom;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

void print(std::ostream& os, const Expr& e);

void print_child(std::ostream& os, const Expr& child, bool parens) {
  if (parens) os << '(';
  print(os, child);
  if (parens) os << ')';
}

void print(std::ostream& os, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          if (n.value < 0) os << "(0 - " << -n.value << ')';
          else os << n.value;
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, StrLit>) {
          os << quote(n.value);
        } else if constexpr (std::is_same_v<T, NameRef>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          os << spelling(n.op);
          // `-o` would lex as a move arrow
          bool name = std::holds_alternative<NameRef>(n.operand->node);
          print_child(os, *n.operand, level(*n.operand) < 6 || (n.op == UnaryOp::Neg && name));
        } else {
          int lv = level(n.op);
          print_child(os, *n.lhs, level(*n.lhs) < lv);
          os << ' ' << spelling(n.op) << ' ';
          print_child(os, *n.rhs, level(*n.rhs) <= lv);
        }
      },
      e.node);
}

std::string indent(int depth) { return std::string(4 * static_cast<std::size_t>(depth), ' '); }

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

void print_block(std::ostream& os, const Block& b, int depth);

void print_statement(std::ostream& os, const Statement& s, int depth) {
  os << indent(depth);
  std::visit(
      [&](const auto& st) {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, FieldSend>) {
          print(os, *st.value);
          os << " -> " << st.field << '\n';
        } else if constexpr (std::is_same_v<T, PartySend>) {
          print(os, *st.value);
          os << " -> " << st.party << '\n';
        } else if constexpr (std::is_same_v<T, AssetMove>) {
          if (st.shorthand) {
            os << st.from << " -o " << st.to << '\n';
          } else {
            print_child(os, *st.amount, level(*st.amount) < kAtom);
            os << " -o " << st.from << ", " << st.to << '\n';
          }
        } else if constexpr (std::is_same_v<T, AssetDrain>) {
          os << st.from << " -o " << st.to << '\n';
        } else {
          os << "if (";
          print(os, *st.cond);
          os << ") {\n";
          print_block(os, st.then_branch, depth + 1);
          os << indent(depth) << '}';
          if (st.else_branch) {
            os << " else {\n";
            print_block(os, *st.else_branch, depth + 1);
            os << indent(depth) << '}';
          }
          os << '\n';
        }
      },
      s.node);
}

void print_block(std::ostream& os, const Block& b, int depth) {
  for (const auto& s : b) print_statement(os, s, depth);
}

}  // namespace

std::string to_source(const Expr& e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

std::string to_source(const ContractAst& c) {
  std::ostringstream os;
  os << "stipula " << c.name << " {\n";
  os << indent(1) << "asset" << (c.assets.empty() ? "" : " " + join(c.assets)) << '\n';
  os << indent(1) << "field" << (c.fields.empty() ? "" : " " + join(c.fields)) << '\n';
  os << indent(1) << "agreement (" << join(c.parties) << ')';
  if (!c.agreement.header_fields.empty()) os << '(' << join(c.agreement.header_fields) << ')';
  os << " {\n";
  for (const auto& b : c.agreement.bindings)
    os << indent(2) << join(b.parties) << " : " << join(b.fields) << '\n';
  os << indent(1) << "} => @" << c.agreement.initial_state << '\n';
  for (const auto& f : c.clauses) {
    os << indent(1) << '@' << f.source_state << ' ' << f.party << " : " << f.name << '(' << join(f.value_params)
       << ")[" << join(f.asset_params) << ']';
    if (f.guard) {
      os << " (";
      print(os, **f.guard);
      os << ')';
    }
    os << " {\n";
    print_block(os, f.body, 2);
    for (const auto& e : f.events) {
      os << indent(2) << "now + ";
      std::visit([&](const auto& v) { os << v; }, e.delay.value);
      os << " >> @" << e.trigger_state << " {\n";
      print_block(os, e.body, 3);
      os << indent(2) << "} => @" << e.target_state << '\n';
    }
    os << indent(1) << "} => @" << f.target_state << '\n';
  }
  os << "}\n";
  return os.str();
}

}  // namespace stipula
