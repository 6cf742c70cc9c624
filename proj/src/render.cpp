#include <sstream>

#include "stipula/codegen.hpp"

namespace stipula {

namespace {

constexpr std::size_t kLineWidth = 100;

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

/// Conjuncts joined by `&&` need parentheses when they bind looser.
std::string conjunct_text(const TermPtr& t, const RenderOptions& ro) {
  std::string s = render(t, ro);
  bool loose = t->kind == Term::Kind::Ite ||
               (t->kind == Term::Kind::Binary && (t->op == TermOp::Or || t->op == TermOp::Implies));
  return loose ? "(" + s + ")" : s;
}

/// `@ keyword  piece sep piece ...;` packed into lines; continuation lines
/// are aligned under the first piece and start with `cont`.
void packed(std::ostream& os, const std::string& lead, const std::string& keyword, std::size_t width,
            const std::vector<std::string>& pieces, const std::string& sep, const std::string& cont) {
  std::string first = lead + "@ " + pad(keyword, width);
  std::string next = lead + "@ " + std::string(width, ' ') + cont;
  std::string line = first;
  bool fresh = true;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string& p = pieces[i];
    if (fresh) {
      line += p;
      fresh = false;
    } else if (line.size() + sep.size() + p.size() > kLineWidth) {
      // A list separator stays at the end of the broken line.
      if (cont.empty()) line += sep.substr(0, sep.find_last_not_of(' ') + 1);
      os << line << "\n";
      line = next + p;
    } else {
      line += sep + p;
    }
  }
  os << line << ";\n";
}

std::vector<std::string> conjuncts_text(const std::vector<Condition>& cs, const RenderOptions& ro) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(conjunct_text(c, ro));
  if (out.empty()) out.push_back("true");
  return out;
}

std::string params_text(const std::vector<MethodParam>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += std::string(type_name(ps[i].type)) + " " + ps[i].name;
  }
  return out;
}

bool one_liner(const TargetStmt& s) {
  if (s.kind != TargetStmt::Kind::If || !s.else_body.empty() || s.body.empty()) return false;
  for (const auto& b : s.body)
    if (b.kind != TargetStmt::Kind::Call && b.kind != TargetStmt::Kind::Return) return false;
  return true;
}

std::string simple(const TargetStmt& s) {
  switch (s.kind) {
    case TargetStmt::Kind::Assign:
      return (s.target ? render(t_loc(*s.target)) : s.name) + " = " + render(s.value) + ";";
    case TargetStmt::Kind::Local: return "int " + s.name + " = " + render(s.value) + ";";
    case TargetStmt::Kind::Increment: return s.name + "++;";
    case TargetStmt::Kind::Return: return "return;";
    case TargetStmt::Kind::Comment: return "// " + s.name;
    case TargetStmt::Kind::Call: {
      std::string out = s.name + "(";
      for (std::size_t i = 0; i < s.args.size(); ++i) out += (i ? ", " : "") + s.args[i];
      return out + ");";
    }
    default: return "";
  }
}

void statements(std::ostream& os, const std::vector<TargetStmt>& body, int depth);

void statement(std::ostream& os, const TargetStmt& s, int depth) {
  std::string ind(static_cast<std::size_t>(depth) * 4, ' ');
  switch (s.kind) {
    case TargetStmt::Kind::If: {
      if (one_liner(s)) {
        os << ind << "if (" << render(s.value) << ") {";
        for (const auto& b : s.body) os << " " << simple(b);
        os << " }\n";
        return;
      }
      os << ind << "if (" << render(s.value) << ") {\n";
      statements(os, s.body, depth + 1);
      if (!s.else_body.empty()) {
        os << ind << "} else {\n";
        statements(os, s.else_body, depth + 1);
      }
      os << ind << "}\n";
      return;
    }
    case TargetStmt::Kind::Loop: {
      RenderOptions ro;
      ro.unqualified_contract = true;
      const std::string lead = ind + "  ";
      os << ind << "/*@\n";
      packed(os, lead, "loop_invariant", 15, conjuncts_text(s.invariants, ro), " && ", "&& ");
      packed(os, lead, "decreases", 15, {render(s.variant, ro)}, "", "");
      packed(os, lead, "assignable", 15, s.loop_frame, ", ", "");
      os << lead << "@*/\n";
      os << ind << "while (" << render(s.value) << ") {\n";
      statements(os, s.body, depth + 1);
      os << ind << "}\n";
      return;
    }
    default: os << ind << simple(s) << "\n";
  }
}

void statements(std::ostream& os, const std::vector<TargetStmt>& body, int depth) {
  for (const auto& s : body) statement(os, s, depth);
}

void method(std::ostream& os, const TargetMethod& m) {
  RenderOptions pre;
  pre.old_as_current = true;
  const std::string lead = "      ";
  os << "    /*@ public normal_behavior\n";
  packed(os, lead, "requires", 11, conjuncts_text(m.requires_, pre), " && ", "&& ");
  packed(os, lead, "ensures", 11, conjuncts_text(m.ensures, {}), " && ", "&& ");
  std::vector<std::string> frame;
  for (const auto& l : m.frame) frame.push_back(l.str());
  if (frame.empty()) frame.push_back("\\nothing");
  packed(os, lead, "assignable", 11, frame, ", ", "");
  os << lead << "@*/\n";
  os << "    public final static void " << m.name << "(" << params_text(m.params) << ") {\n";
  statements(os, m.body, 2);
  os << "    }\n";
}

void static_field(std::ostream& os, const StaticField& f) {
  std::string decl = "public static " + std::string(f.ghost ? "ghost " : "") + f.type + " " + f.name;
  if (!f.initializer.empty()) decl += " = " + f.initializer;
  os << "    " << (f.ghost ? "//@ " : "") << decl << ";\n";
}

}  // namespace

std::string render(const TargetUnit& u) {
  std::ostringstream os;
  if (u.bigint_math) os << "/*@ spec_bigint_math code_bigint_math @*/\n";
  os << "public class " << u.class_name << " {\n";
  bool any = false;
  auto gap = [&] {
    if (any) os << "\n";
    any = true;
  };
  if (!u.statics.empty()) {
    gap();
    for (const auto& f : u.statics) static_field(os, f);
  }
  if (!u.invariants.empty()) {
    gap();
    for (const auto& inv : u.invariants) os << "    //@ public static invariant " << render(inv) << ";\n";
  }
  for (const auto& m : u.methods) {
    gap();
    method(os, m);
  }
  os << "}\n";
  for (const auto& p : u.parties) {
    os << "\nclass " << p.name << " {\n";
    for (const auto& f : p.statics) static_field(os, f);
    os << "}\n";
  }
  return os.str();
}

}  // namespace stipula
