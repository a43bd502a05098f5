// qfps: quadratic differential equations, recurrences, and normal-form
// series representations for a class of non-holonomic elementary functions.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "qfps/qde.hpp"
#include "qfps/qre.hpp"
#include "qfps/render.hpp"
#include "qfps/rep.hpp"
#include "qfps/series.hpp"

using namespace qfps;

namespace {

enum ExitCode { kOk = 0, kNotEqual = 1, kFailure = 2, kUsage = 64 };

struct Common {
  std::vector<std::string> params;
  std::string format = "text";
  int max_index = 21;
};

int default_max_index() {
  if (const char* env = std::getenv("QFPS_MAX_INDEX")) {
    int v = std::atoi(env);
    if (v >= 3) return v;
  }
  return 21;
}

void add_common(CLI::App* cmd, Common& c, bool with_params = true) {
  if (with_params)
    cmd->add_option("--param", c.params, "declare a parameter symbol (repeatable)");
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"text", "json", "latex"}));
}

Expr parse_input(const std::string& text, const Common& c) {
  std::set<std::string> ps(c.params.begin(), c.params.end());
  return parse(text, ps);
}

template <typename T>
void emit(const T& value, const std::string& format) {
  if (format == "json") std::cout << to_json(value) << "\n";
  else if (format == "latex") std::cout << to_latex(value) << "\n";
  else std::cout << to_string(value) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qfps - least-order quadratic differential equations, quadratic\n"
      "recurrences, and recursive normal forms for power series of\n"
      "non-holonomic elementary functions"};
  app.require_subcommand(1);

  std::string expr_text, expr_text2;
  int k_index = 0;
  int order = 7;
  bool with_oracle = false;

  Common c;
  c.max_index = default_max_index();

  auto* qde_cmd = app.add_subcommand("qde", "find a least-order QDE for EXPR");
  qde_cmd->add_option("expr", expr_text, "expression in z")->required();
  qde_cmd->add_option("--max-index", c.max_index, "largest scheme index tried");
  add_common(qde_cmd, c);

  auto* qre_cmd = app.add_subcommand("qre", "convert the QDE of EXPR into a recurrence");
  qre_cmd->add_option("expr", expr_text, "expression in z")->required();
  qre_cmd->add_option("--max-index", c.max_index, "largest scheme index tried");
  add_common(qre_cmd, c);

  auto* fps_cmd = app.add_subcommand("fps", "normal-form series representation of EXPR");
  fps_cmd->add_option("expr", expr_text, "expression in z")->required();
  fps_cmd->add_option("--max-index", c.max_index, "largest scheme index tried");
  add_common(fps_cmd, c, false);

  auto* taylor_cmd = app.add_subcommand("taylor", "truncated expansion via the representation");
  taylor_cmd->add_option("expr", expr_text, "expression in z")->required();
  taylor_cmd->add_option("--order", order, "truncate at z^ORDER")->required();
  taylor_cmd->add_flag("--oracle", with_oracle, "also print the direct series for comparison");
  add_common(taylor_cmd, c, false);

  auto* prove_cmd = app.add_subcommand("prove", "decide zero-equivalence of EXPR1 - EXPR2");
  prove_cmd->add_option("expr1", expr_text, "left-hand side")->required();
  prove_cmd->add_option("expr2", expr_text2, "right-hand side")->required();
  prove_cmd->add_option("--max-index", c.max_index, "largest scheme index tried");
  add_common(prove_cmd, c, false);

  auto* delta2_cmd = app.add_subcommand("delta2", "k-th quadratic derivative of EXPR");
  delta2_cmd->add_option("expr", expr_text, "expression in z")->required();
  delta2_cmd->add_option("k", k_index, "scheme index (k >= 1)")->required();
  add_common(delta2_cmd, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*qde_cmd) {
      Expr f = parse_input(expr_text, c);
      FindOptions fo;
      fo.params = c.params;
      fo.max_index = c.max_index;
      emit(find_qde(f, fo), c.format);
      return kOk;
    }
    if (*qre_cmd) {
      Expr f = parse_input(expr_text, c);
      FindOptions fo;
      fo.params = c.params;
      fo.max_index = c.max_index;
      emit(qde_to_qre(find_qde(f, fo)), c.format);
      return kOk;
    }
    if (*fps_cmd) {
      Expr f = parse_input(expr_text, c);
      FpsOptions opt;
      opt.max_index = c.max_index;
      emit(fps(f, opt), c.format);
      return kOk;
    }
    if (*taylor_cmd) {
      Expr f = parse_input(expr_text, c);
      emit(qtaylor(f, order), c.format);
      if (with_oracle) {
        TruncSeries direct = series_of(f, order);
        if (c.format == "json") std::cout << to_json(direct) << "\n";
        else std::cout << to_string(direct) << "\n";
      }
      return kOk;
    }
    if (*prove_cmd) {
      Expr a = parse_input(expr_text, c);
      Expr b = parse_input(expr_text2, c);
      FpsOptions opt;
      opt.max_index = c.max_index;
      Verdict v = prove(a, b, opt);
      if (c.format == "json") std::cout << to_json(v) << "\n";
      else if (c.format == "latex") std::cout << to_latex(v) << "\n";
      else {
        switch (v.kind) {
          case Verdict::Kind::Equal:
            std::cout << "equal (" << v.reason << ")\n";
            break;
          case Verdict::Kind::NotEqual:
            std::cout << "not-equal at z^" << v.witness_exponent << ": "
                      << to_string(v.lhs_coeff) << " vs " << to_string(v.rhs_coeff)
                      << "\n";
            break;
          case Verdict::Kind::Undecided:
            std::cout << "undecided (" << v.reason << ")\n";
            break;
        }
      }
      if (v.kind == Verdict::Kind::Equal) return kOk;
      if (v.kind == Verdict::Kind::NotEqual) return kNotEqual;
      return kFailure;
    }
    if (*delta2_cmd) {
      if (k_index < 1) {
        std::cerr << "qfps: delta2 index must be >= 1\n";
        return kUsage;
      }
      Expr f = parse_input(expr_text, c);
      std::cout << delta2(f, k_index).to_string() << "\n";
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "qfps: parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "qfps: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
