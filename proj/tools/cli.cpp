#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "kirby/error.hpp"
#include "kirby/gluck.hpp"
#include "kirby/invariants.hpp"
#include "kirby/lang.hpp"
#include "kirby/moves.hpp"

namespace kirby::cli {
namespace {

// Raised for unreadable files and parse failures; maps to kUsage.
struct InputError {
  std::string message;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path + ": cannot open file"};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

template <typename T>
T unwrap(ParseResult<T> r, const std::string& path) {
  if (auto* e = std::get_if<ParseError>(&r)) throw InputError{path + ":" + e->to_string()};
  return std::get<T>(std::move(r));
}

HandleDiagram load_diagram(const std::string& path) { return unwrap(parse_diagram(read_text(path)), path); }
MoveScript load_script(const std::string& path) { return unwrap(parse_script(read_text(path)), path); }
SphericalClassCertificate load_certificate(const std::string& path) {
  return unwrap(parse_certificate(read_text(path)), path);
}

int parse_sign(const std::string& s) {
  if (s == "+" || s == "+1" || s == "1") return 1;
  if (s == "-" || s == "-1") return -1;
  throw InputError{"--sign: expected + or -, got '" + s + "'"};
}

std::size_t default_budget() {
  if (const char* env = std::getenv("KIRBY_BUDGET")) {
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw InputError{"KIRBY_BUDGET: expected a non-negative integer"};
  }
  return SearchBudget{}.max_nodes;
}

void print_hash_chain(std::ostream& out, const HandleDiagram& start, const MoveLog& log) {
  out << "hashes:\n" << canonical_hash(start) << '\n';
  for (const auto& e : log) out << e.post_hash << '\n';
}

// Golden checks for `selftest`.  Each returns true on pass.
struct Check {
  const char* name;
  std::function<bool()> run;
};

HandleDiagram inline_diagram(std::string_view text) { return std::get<HandleDiagram>(parse_diagram(text)); }

const char* const kS2xS2 = "diagram X\nhandle S word 1 framing 0\nhandle K word 1 framing 0\nlink S K = 1\n";

std::vector<Check> golden_checks() {
  std::vector<Check> checks;
  checks.push_back({"s2xs2 invariants", [] {
                      auto s = invariant_summary(inline_diagram(kS2xS2));
                      return s.h1_invariant_factors.empty() && s.h2_rank == 2 && s.form_rank == 2 && s.signature == 0 &&
                             !s.odd && s.gram_torsion == std::vector<BigInt>{1, 1};
                    }});
  checks.push_back({"gluck twist on s2xs2 gives an odd form", [] {
                      auto d = inline_diagram(kS2xS2);
                      for (const char* h : {"S", "K"}) {
                        auto f = intersection_form(gluck_twist(d, {h}, 1));
                        if (!(f.rank == 2 && f.signature == 0 && f.odd && f.torsion == std::vector<BigInt>{1, 1}))
                          return false;
                      }
                      return true;
                    }});
  checks.push_back({"surgery on s2xs2 cancels to the empty diagram", [] {
                      auto d = surger_sphere(inline_diagram(kS2xS2), {"S"}, {"g"});
                      d = cancel_pair_12(d, {"g"}, {"K"});
                      return canonical_form(d) == canonical_form(HandleDiagram{});
                    }});
  checks.push_back({"checker is unknown on s2xs2", [] {
                      return !is_certified(check_gluck_triviality_hypothesis(inline_diagram(kS2xS2), {"S"}));
                    }});
  checks.push_back({"checker certifies a split odd handle", [] {
                      auto d = inline_diagram(std::string(kS2xS2) + "handle E word 1 framing 3\n");
                      auto v = check_gluck_triviality_hypothesis(d, {"S"});
                      return is_certified(v) && std::get<Certified>(v).witness.index() == 1;
                    }});
  checks.push_back({"spherical class S+K has square 2", [] {
                      SphericalClassCertificate c{{{{"S"}, 1, {}}, {{"K"}, 1, {}}}};
                      auto r = represent_spherical_class(inline_diagram(kS2xS2), c);
                      return r.diagram.handle(r.handle).framing == 2;
                    }});
  checks.push_back({"smith form of ((2,4),(6,8))", [] {
                      return invariant_factors(IntMatrix{{2, 4}, {6, 8}}) == std::vector<BigInt>{2, 4};
                    }});
  checks.push_back({"signatures", [] {
                      IntMatrix e8{{2, -1, 0, 0, 0, 0, 0, 0},  {-1, 2, -1, 0, 0, 0, 0, 0}, {0, -1, 2, -1, 0, 0, 0, -1},
                                   {0, 0, -1, 2, -1, 0, 0, 0},  {0, 0, 0, -1, 2, -1, 0, 0}, {0, 0, 0, 0, -1, 2, -1, 0},
                                   {0, 0, 0, 0, 0, -1, 2, 0},   {0, 0, -1, 0, 0, 0, 0, 2}};
                      return form_data(IntMatrix{{1, 0, 0}, {0, -1, 0}, {0, 0, 2}}).signature == 1 &&
                             form_data(IntMatrix{{0, 1}, {1, 0}}).signature == 0 && form_data(e8).signature == 8;
                    }});
  checks.push_back({"meridian trivialization", [] {
                      auto d = inline_diagram(
                          "diagram F\nhandle S word 1 framing 0\nhandle A word 1 framing 0\nhandle K word 1 framing 1\n"
                          "handle C word 1 framing 0\nlink S A = 1\nlink K C = 1\n");
                      auto v = trivialize_gluck(d, {"S"}, {"K"});
                      if (!is_certified(v)) return false;
                      const auto& c = std::get<Certified>(v);
                      return canonical_form(replay(c.start, c.log)) == canonical_form(d);
                    }});
  return checks;
}

const char* const kCertHelp =
    "Certificate files list one term per line:\n"
    "  term <handle> sign <+|-> conj <word-expr>\n"
    "The class is the signed sum of the handles; the product of\n"
    "conj * word(handle)^sign * conj^-1 over all terms must freely reduce to 1.\n";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kirby calculus engine: handle diagrams, moves, invariants and Gluck twists", "kirby"};
  app.require_subcommand(1);
  app.footer(kCertHelp);

  std::string diagram_path, script_path, emit_path, sphere, dot, handle, sign = "+", cert_path;
  bool show_log = false;
  std::optional<std::size_t> budget;
  std::size_t depth = SearchBudget{}.max_depth;

  auto* inv = app.add_subcommand("invariants", "Print the invariant summary of a diagram");
  inv->add_option("diagram", diagram_path, "Diagram file (.kd)")->required();

  auto* apply = app.add_subcommand("apply", "Apply a move script and print the result with its hash chain");
  apply->add_option("diagram", diagram_path, "Diagram file (.kd)")->required();
  apply->add_option("script", script_path, "Script file (.ks)")->required();
  apply->add_option("--emit", emit_path, "Also write the resulting diagram to this file");
  apply->add_flag("--log", show_log, "Print one line per step: index, pre hash, post hash, move");

  auto* gluck = app.add_subcommand("gluck", "Gluck twist along a sphere handle");
  gluck->add_option("diagram", diagram_path, "Diagram file (.kd)")->required();
  gluck->add_option("--sphere", sphere, "0-framed trivial-word handle")->required();
  gluck->add_option("--sign", sign, "Twist sign, + or - (default +)");

  auto* surger = app.add_subcommand("surger", "Surger along a sphere handle and print the new diagram");
  surger->add_option("diagram", diagram_path, "Diagram file (.kd)")->required();
  surger->add_option("--sphere", sphere, "0-framed trivial-word handle")->required();
  surger->add_option("--dot", dot, "Id for the new dotted circle")->required();

  auto* check = app.add_subcommand("check", "Look for a spherical class with odd square after surgery");
  check->add_option("diagram", diagram_path, "Diagram file (.kd)")->required();
  check->add_option("--sphere", sphere, "0-framed trivial-word handle")->required();
  check->add_option("--cert", cert_path, "Certificate file (format below)");
  check->footer(kCertHelp);

  auto* triv = app.add_subcommand("trivialize", "Search for a move script undoing the Gluck twist");
  triv->add_option("diagram", diagram_path, "Diagram file (.kd)")->required();
  triv->add_option("--sphere", sphere, "0-framed trivial-word handle")->required();
  triv->add_option("--handle", handle, "Odd-framed trivial-word handle K")->required();
  triv->add_option("--budget", budget, "Node limit (default: $KIRBY_BUDGET or 10000)");
  triv->add_option("--depth", depth, "Depth limit")->capture_default_str();

  auto* selftest = app.add_subcommand("selftest", "Run the embedded golden checks");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Error& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (inv->parsed()) {
      out << render(invariant_summary(load_diagram(diagram_path)));
      return kSuccess;
    }
    if (apply->parsed()) {
      auto d = load_diagram(diagram_path);
      auto s = load_script(script_path);
      auto r = apply_script(d, s);
      std::string text = serialize_diagram(r.diagram);
      out << text;
      if (show_log) {
        out << "log:\n";
        for (std::size_t i = 0; i < r.log.size(); ++i)
          out << i + 1 << ' ' << r.log[i].pre_hash << ' ' << r.log[i].post_hash << ' ' << format_move(r.log[i].move)
              << '\n';
      }
      print_hash_chain(out, d, r.log);
      if (!emit_path.empty()) {
        std::ofstream f(emit_path, std::ios::binary);
        if (!(f << text)) throw InputError{emit_path + ": cannot write file"};
      }
      return kSuccess;
    }
    if (gluck->parsed()) {
      auto d = load_diagram(diagram_path);
      int eps = parse_sign(sign);
      auto post = gluck_twist(d, {sphere}, eps);
      out << "[pre]\n" << render(invariant_summary(d));
      out << "[post]\n" << render(invariant_summary(post));
      out << "[diagram]\n" << serialize_diagram(post);
      return kSuccess;
    }
    if (surger->parsed()) {
      out << serialize_diagram(surger_sphere(load_diagram(diagram_path), {sphere}, {dot}));
      return kSuccess;
    }
    if (check->parsed()) {
      auto d = load_diagram(diagram_path);
      std::optional<SphericalClassCertificate> cert;
      if (!cert_path.empty()) cert = load_certificate(cert_path);
      auto v = check_gluck_triviality_hypothesis(d, {sphere}, cert);
      out << render(v);
      return is_certified(v) ? kSuccess : kUnknown;
    }
    if (triv->parsed()) {
      auto d = load_diagram(diagram_path);
      SearchBudget b;
      b.max_nodes = budget ? *budget : default_budget();
      b.max_depth = depth;
      auto v = trivialize_gluck(d, {sphere}, {handle}, b);
      out << render(v);
      return is_certified(v) ? kSuccess : kUnknown;
    }
    if (selftest->parsed()) {
      bool all = true;
      for (const auto& c : golden_checks()) {
        bool ok = false;
        try {
          ok = c.run();
        } catch (const std::exception&) {
          ok = false;
        }
        out << (ok ? "PASS " : "FAIL ") << c.name << '\n';
        all = all && ok;
      }
      return all ? kSuccess : kUnknown;
    }
  } catch (const InputError& e) {
    err << "error: " << e.message << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kMoveError;
  }
  return kUsage;
}

}  // namespace kirby::cli
