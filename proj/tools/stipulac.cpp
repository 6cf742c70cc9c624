// stipulac: batch driver for parsing, analysis, translation and replay.
//
// Exit codes: 0 ok, 1 syntax/semantic/usage error, 2 non-disjoint cycles,
// 3 output write failure, 4 trace failure, 5 open proof obligations,
// 6 prover missing or timed out.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stipula/codegen.hpp"
#include "stipula/interp.hpp"
#include "stipula/parser.hpp"
#include "stipula/report.hpp"

namespace fs = std::filesystem;
using namespace stipula;

namespace {

enum Exit { kOk = 0, kError = 1, kNotDisjoint = 2, kWrite = 3, kTrace = 4, kOpen = 5, kProver = 6 };

struct WriteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ContractAst load(const std::string& path) {
  std::string text = read_file(path);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ArgumentError(path + " is empty");
  return load_contract(text);
}

/// Write via a sibling temporary so readers never see a partial file.
void write_atomically(const fs::path& target, const std::string& text) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw WriteError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw WriteError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw WriteError("cannot write " + target.string());
  }
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") std::cout << text;
  else write_atomically(out_path, text);
}

/// `-o` names a directory (existing, or with a trailing slash) or a file.
fs::path java_target(const std::string& out, const std::string& class_name) {
  std::string file = class_name + ".java";
  if (out.empty()) return fs::path(file);
  fs::path p(out);
  if (fs::is_directory(p) || out.back() == '/') {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw WriteError("cannot create directory " + out);
    return p / file;
  }
  return p;
}

CycleReport checked_cycles(const Automaton& a) {
  CycleReport r = enumerate_cycles(a);
  if (!r.disjoint) {
    std::string msg = "cycles are not disjoint";
    if (r.witness) msg += ": " + describe(a, r.witness->first) + " and " + describe(a, r.witness->second);
    throw NotDisjointError(msg);
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stipula contract compiler and analyzer"};
  app.require_subcommand(1);

  std::string file, out, trace_path, prover;
  bool java_int = false;
  int timeout = 300;

  auto* check = app.add_subcommand("check", "parse and check a contract, report its cycle structure");
  auto* graph = app.add_subcommand("graph", "print the contract automaton as Graphviz DOT");
  auto* report = app.add_subcommand("report", "print the asset and clause-contract analysis as JSON");
  auto* plan = app.add_subcommand("plan", "print the scenario plans as JSON");
  auto* translate_cmd = app.add_subcommand("translate", "write the annotated Java translation");
  auto* run = app.add_subcommand("run", "replay a JSON trace in the interpreter");
  auto* verify = app.add_subcommand("verify", "translate, then run an external prover on the result");
  for (auto* sub : {check, graph, report, plan, translate_cmd, run, verify})
    sub->add_option("file", file, "contract source")->required();
  for (auto* sub : {graph, report, plan, translate_cmd, run, verify})
    sub->add_option("-o,--output", out, "output file or directory (default: stdout, or <Contract>.java)");
  for (auto* sub : {translate_cmd, verify})
    sub->add_flag("--java-int", java_int, "omit the mathematical-integer modifiers");
  run->add_option("-t,--trace", trace_path, "trace file (JSON array of steps)")->required();
  verify->add_option("--prover", prover, "prover command; defaults to $STIPULAC_PROVER");
  verify->add_option("--timeout", timeout, "prover timeout in seconds")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    ContractAst ast = load(file);
    LowerOptions lopts;
    lopts.bigint_math = !java_int;

    if (check->parsed()) {
      Automaton a = build_automaton(ast);
      CycleReport r = enumerate_cycles(a);
      std::cout << ast.name << ": " << cycle_summary(r) << "\n";
      if (!r.disjoint) {
        if (r.witness)
          std::cerr << "stipulac: overlapping cycles " << describe(a, r.witness->first) << " and "
                    << describe(a, r.witness->second) << "\n";
        return kNotDisjoint;
      }
      for (const auto& s : unreachable_states(a)) std::cerr << "stipulac: warning: @" << s << " is unreachable\n";
      return kOk;
    }
    if (graph->parsed()) {
      emit(out, to_dot(build_automaton(ast)));
      return kOk;
    }
    if (report->parsed()) {
      emit(out, analysis_report_json(ast) + "\n");
      return kOk;
    }
    if (plan->parsed()) {
      Automaton a = build_automaton(ast);
      emit(out, plans_to_json(a, enumerate_scenarios(a, checked_cycles(a), ast)) + "\n");
      return kOk;
    }
    if (translate_cmd->parsed()) {
      checked_cycles(build_automaton(ast));
      std::string text = render(translate(ast, lopts));
      if (out == "-") {
        std::cout << text;
        return kOk;
      }
      fs::path target = java_target(out, ast.name);
      write_atomically(target, text);
      std::cout << target.string() << "\n";
      return kOk;
    }
    if (run->parsed()) {
      std::vector<TraceStep> steps = parse_trace(read_file(trace_path));
      RuntimeState s;
      try {
        s = run_trace(ast, steps);
      } catch (const TraceError& e) {
        std::cerr << "stipulac: " << trace_path << ": " << e.what() << "\n";
        return kTrace;
      }
      emit(out, state_to_json(s) + "\n");
      return kOk;
    }
    if (verify->parsed()) {
      if (prover.empty())
        if (const char* env = std::getenv("STIPULAC_PROVER")) prover = env;
      checked_cycles(build_automaton(ast));
      fs::path target = java_target(out.empty() ? fs::temp_directory_path().string() + "/" : out, ast.name);
      write_atomically(target, render(translate(ast, lopts)));
      VerifierReport r;
      try {
        r = verify_external(target.string(), prover, std::chrono::seconds(timeout));
      } catch (const ProverNotFound& e) {
        std::cerr << "stipulac: " << e.what() << "\n";
        return kProver;
      } catch (const ProverTimeout& e) {
        std::cerr << "stipulac: " << e.what() << "\n";
        return kProver;
      }
      std::cout << report_to_json(r) << "\n";
      if (r.status == VerifierReport::Status::Skipped)
        std::cerr << "stipulac: no prover configured (--prover or STIPULAC_PROVER); verification skipped\n";
      return r.open_count() ? kOpen : kOk;
    }
  } catch (const NotDisjointError& e) {
    std::cerr << "stipulac: " << file << ": " << e.what() << "\n";
    return kNotDisjoint;
  } catch (const WriteError& e) {
    std::cerr << "stipulac: " << e.what() << "\n";
    return kWrite;
  } catch (const Error& e) {
    std::cerr << "stipulac: " << file << ": " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "stipulac: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
