// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <filesystem>
#include <iostream>

#include "cli.hpp"
#include "support.hpp"

using namespace kirby;
using namespace kirby::test;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s << "s";
  return os.str();
}

const std::vector<BigInt> kUnimodular2{1, 1};

RandomDiagramParams corpus_params() { return {6, 10, 5, 5, 6}; }

// The shared random corpus for criteria 3, 4 and 6.
std::vector<HandleDiagram> random_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<HandleDiagram> out;
  while (out.size() < n) {
    auto d = random_diagram(rng, corpus_params());
    if (is_valid(d)) out.push_back(std::move(d));
  }
  return out;
}

Outcome criterion1() {
  Outcome o;
  auto t0 = Clock::now();
  auto d = s2xs2();
  o.require(intersection_form(d) == FormData{2, 0, false, kUnimodular2}, "input form is not (2, 0, even, (1,1))");
  for (const char* h : {"S", "K"})
    for (int eps : {1, -1}) {
      auto f = intersection_form(gluck_twist(d, {h}, eps));
      o.require(f == FormData{2, 0, true, kUnimodular2},
                std::string("twist along ") + h + " is not (2, 0, odd, (1,1))");
    }
  double s = seconds_since(t0);
  o.require(s < 1.0, "took " + fmt_seconds(s));
  if (o.pass) o.detail = "both handles, both signs, " + fmt_seconds(s);
  return o;
}

Outcome criterion2() {
  Outcome o;
  auto t0 = Clock::now();
  auto d = surger_sphere(s2xs2(), {"S"}, {"g"});
  o.require(d == diagram("dots g\nhandle K word g framing 0\n"), "surgered diagram is not {dot g; K(w=g)}");
  auto e = cancel_pair_12(d, {"g"}, {"K"});
  o.require(canonical_form(e) == canonical_form(HandleDiagram{}), "did not cancel to the empty diagram");
  double s = seconds_since(t0);
  o.require(s < 1.0, "took " + fmt_seconds(s));
  if (o.pass) o.detail = fmt_seconds(s);
  return o;
}

Outcome criterion3(const std::vector<HandleDiagram>& corpus) {
  Outcome o;
  auto t0 = Clock::now();
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<int> len(1, 15);
  std::size_t moves = 0, flag_changes = 0;
  for (std::size_t i = 0; i < corpus.size() && o.pass; ++i) {
    auto d = corpus[i];
    auto before = invariant_summary(d);
    for (int k = len(rng); k > 0; --k) {
      d = apply_move(d, random_handle_move(rng, d));
      ++moves;
    }
    o.require(is_valid(d), "invalid diagram after moves on corpus item " + std::to_string(i));
    auto after = invariant_summary(d);
    o.require(after.same_invariants(before), "invariants changed on corpus item " + std::to_string(i));
    if (after.three_handle_flag != before.three_handle_flag) ++flag_changes;
  }
  double s = seconds_since(t0);
  o.require(s < 60.0, "took " + fmt_seconds(s));
  if (o.pass)
    o.detail = std::to_string(corpus.size()) + " diagrams, " + std::to_string(moves) + " moves, " + fmt_seconds(s) +
               " (3-handle count changed in " + std::to_string(flag_changes) + ")";
  return o;
}

Outcome criterion4(const std::vector<HandleDiagram>& corpus) {
  Outcome o;
  std::mt19937_64 rng(1004);
  std::bernoulli_distribution coin;
  std::size_t slides = 0, exchanges = 0;
  for (std::size_t i = 0; i < corpus.size() && o.pass; ++i) {
    const auto& d = corpus[i];
    if (d.handles.size() >= 2) {
      std::uniform_int_distribution<std::size_t> pick(0, d.handles.size() - 1);
      std::size_t a = pick(rng), b = pick(rng);
      if (a == b) b = (a + 1) % d.handles.size();
      int eps = coin(rng) ? 1 : -1;
      auto band = random_word(rng, d.dots, 3);
      const auto& hi = d.handles[a].id;
      const auto& hj = d.handles[b].id;
      auto back = slide_two_handle(slide_two_handle(d, hi, hj, eps, band), hi, hj, -eps, band);
      o.require(back == d && canonical_form(back) == canonical_form(d),
                "slide inverse failed on corpus item " + std::to_string(i));
      ++slides;
    }
    auto e = d;
    auto s = plant_sphere(e);
    auto g = fresh_generator_id(e, "x");
    auto there = exchange_zero_to_dot(e, s, g);
    auto h = fresh_handle_id(there, "y");
    auto back = exchange_dot_to_zero(there, g, h);
    o.require(canonical_form(back) == canonical_form(e), "exchange round trip failed on corpus item " + std::to_string(i));
    ++exchanges;
  }
  if (o.pass) o.detail = std::to_string(slides) + " slide inverses, " + std::to_string(exchanges) + " exchange round trips";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(1005);
  std::size_t n = 0, nonzero = 0;
  while (n < 250 && o.pass) {
    auto d = random_diagram(rng, corpus_params());
    auto cert = random_certificate(rng, d);
    if (cert.terms.empty()) continue;
    auto r = represent_spherical_class(d, cert);
    auto c = certificate_coefficients(d, cert);
    BigInt q = quadratic_value(d, c);
    o.require(BigInt(r.diagram.handle(r.handle).framing) == q, "f_h != c^T L c on certificate " + std::to_string(n));
    o.require(r.diagram.handle(r.handle).word.empty(), "represented handle has a nontrivial word");
    if (std::any_of(c.begin(), c.end(), [](Int x) { return x != 0; })) ++nonzero;
    ++n;
  }
  if (o.pass) o.detail = std::to_string(n) + " certificates (" + std::to_string(nonzero) + " with nonzero class)";
  return o;
}

Outcome criterion6(const std::vector<HandleDiagram>& corpus) {
  Outcome o;
  for (std::size_t i = 0; i < corpus.size() && o.pass; ++i) {
    auto d = corpus[i];
    auto s = plant_sphere(d);
    auto twice = gluck_twist(gluck_twist(d, s, 1), s, 1);
    o.require(intersection_form(twice) == intersection_form(d), "form changed on corpus item " + std::to_string(i));
  }
  if (o.pass) o.detail = std::to_string(corpus.size()) + " diagrams";
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(1007);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  const int n = 600;
  for (int t = 0; t < n && o.pass; ++t) {
    auto m = random_matrix(rng, dim(rng), dim(rng), 4);
    auto s = smith_normal_form(m);
    o.require(s.U * m * s.V == s.D, "U*M*V != D for matrix " + std::to_string(t));
    auto naive = naive_smith_diagonal(m);
    std::vector<BigInt> diag;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) diag.push_back(s.D(i, i));
    o.require(diag == std::vector<BigInt>(naive.begin(), naive.end()), "diagonal differs for matrix " + std::to_string(t));
  }
  if (o.pass) o.detail = std::to_string(n) + " matrices up to 6x6, entries in [-4, 4]";
  return o;
}

Outcome criterion8() {
  Outcome o;
  o.require(form_data(IntMatrix{{1, 0, 0}, {0, -1, 0}, {0, 0, 2}}).signature == 1, "diag(1,-1,2)");
  o.require(form_data(IntMatrix{{0, 1}, {1, 0}}).signature == 0, "Hopf block");
  long jacobi = 0;
  o.require(jacobi_signature(e8(), jacobi) && jacobi == 8, "E8 oracle");
  o.require(form_data(e8()).signature == 8, "E8");
  if (o.pass) o.detail = "diag(1,-1,2) -> 1, Hopf -> 0, E8 -> 8";
  return o;
}

Outcome criterion9() {
  Outcome o;
  const char* names[] = {"fig2_split.kd", "fig2_hopf.kd",  "fig2_k3.kd",
                         "fig2_kneg.kd",  "fig2_dotted.kd", "fig2_two_strands.kd"};
  double worst = 0;
  for (const char* name : names) {
    auto d = corpus_diagram(name);
    auto t0 = Clock::now();
    auto v = trivialize_gluck(d, {"S"}, {"K"}, SearchBudget{10000, 8, 1});
    double s = seconds_since(t0);
    worst = std::max(worst, s);
    o.require(is_certified(v), std::string(name) + ": unknown");
    if (!is_certified(v)) continue;
    const auto& c = std::get<Certified>(v);
    o.require(canonical_form(replay(d, c.log)) == canonical_form(d), std::string(name) + ": replay mismatch");
    o.require(s < 30.0, std::string(name) + ": took " + fmt_seconds(s));
  }
  if (o.pass) o.detail = std::to_string(std::size(names)) + " instances, slowest " + fmt_seconds(worst);
  return o;
}

int cli_code(std::vector<std::string> args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Outcome criterion10() {
  Outcome o;
  namespace fs = std::filesystem;
  std::size_t round = 0, malformed = 0;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(corpus_path(""))) files.push_back(e.path());
  for (const auto& e : fs::directory_iterator(corpus_path("malformed"))) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    if (!fs::is_regular_file(p)) continue;
    auto text = read_file(p.string());
    bool bad = p.parent_path().filename() == "malformed";
    auto check_span = [&](const ParseError& e) {
      std::size_t line = 1, start = 0;
      while (line < e.span.line && start <= text.size()) {
        start = text.find('\n', start);
        if (start == std::string::npos) return false;
        ++start;
        ++line;
      }
      auto end = text.find('\n', start);
      std::size_t len = (end == std::string::npos ? text.size() : end) - start;
      return e.span.column >= 1 && e.span.length >= 1 && e.span.column - 1 + e.span.length <= len;
    };
    if (p.extension() == ".kd") {
      auto r = parse_diagram(text);
      if (bad) {
        auto* e = std::get_if<ParseError>(&r);
        o.require(e && check_span(*e), p.filename().string() + ": no in-bounds ParseError");
        ++malformed;
      } else {
        auto* d = std::get_if<HandleDiagram>(&r);
        o.require(d && diagram(serialize_diagram(*d)) == *d, p.filename().string() + ": round trip");
        ++round;
      }
    } else if (p.extension() == ".ks") {
      auto r = parse_script(text);
      if (bad) {
        auto* e = std::get_if<ParseError>(&r);
        o.require(e && check_span(*e), p.filename().string() + ": no in-bounds ParseError");
        ++malformed;
      } else {
        auto* s = std::get_if<MoveScript>(&r);
        o.require(s && script(format_script(*s)) == *s, p.filename().string() + ": round trip");
        ++round;
      }
    }
  }
  o.require(cli_code({"gluck", corpus_path("s2xs2.kd"), "--sphere", "S"}) == 0, "exit 0");
  o.require(cli_code({"check", corpus_path("s2xs2.kd"), "--sphere", "S"}) == 1, "exit 1");
  o.require(cli_code({"invariants", corpus_path("malformed/unknown_generator.kd")}) == 2, "exit 2 (parse)");
  o.require(cli_code({"bogus"}) == 2, "exit 2 (usage)");
  o.require(cli_code({"gluck", corpus_path("cp2_cp2bar.kd"), "--sphere", "K"}) == 3, "exit 3");
  o.require(cli_code({"invariants", corpus_path("empty.kd")}) == 0, "exit 0 (empty)");
  if (o.pass)
    o.detail = std::to_string(round) + " round trips, " + std::to_string(malformed) + " malformed fixtures, exit codes 0-3";
  return o;
}

}  // namespace

int main() {
  auto corpus = random_corpus(1200, 2024);
  struct Row {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Row> rows{
      {1, "gluck twist on S2xS2 gives the odd form", criterion1},
      {2, "surgery on S2xS2 cancels to the empty diagram", criterion2},
      {3, "handle moves preserve invariants", [&] { return criterion3(corpus); }},
      {4, "slide inverse and exchange round trip", [&] { return criterion4(corpus); }},
      {5, "represented class has framing c^T L c", criterion5},
      {6, "double twist preserves the form", [&] { return criterion6(corpus); }},
      {7, "smith form matches the naive oracle", criterion7},
      {8, "signature spot checks", criterion8},
      {9, "trivialization of the meridian corpus", criterion9},
      {10, "parser round trip, diagnostics, exit codes", criterion10},
  };
  bool all = true;
  for (const auto& r : rows) {
    Outcome o;
    try {
      o = r.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << " [" << o.detail << "]"
              << std::endl;
  }
  return all ? 0 : 1;
}
