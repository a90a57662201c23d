#include "kirby/lang.hpp"

#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace kirby {

std::string ParseError::to_string() const {
  std::ostringstream os;
  os << span.line << ':' << span.column << ": " << message;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
    os << ')';
  }
  return os.str();
}

namespace {

constexpr Int kMaxExponent = 10000;

struct Token {
  std::string text;
  SourceSpan span;
};

using Line = std::vector<Token>;

// Splits into lines of whitespace-separated tokens; `=` is always its own
// token and `#` starts a comment.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t line_no = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line;
    std::size_t i = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
    while (i < raw.size()) {
      if (is_space(raw[i])) {
        ++i;
        continue;
      }
      std::size_t start = i;
      if (raw[i] == '=') {
        ++i;
      } else {
        while (i < raw.size() && !is_space(raw[i]) && raw[i] != '=') ++i;
      }
      line.push_back({std::string(raw.substr(start, i - start)), {line_no, start + 1, i - start}});
    }
    lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
    ++line_no;
  }
  return lines;
}

struct Failure {
  ParseError error;
};

[[noreturn]] void fail(const SourceSpan& span, std::string message, std::vector<std::string> expected = {}) {
  throw Failure{{span, std::move(message), std::move(expected)}};
}

// "Missing token" errors point at the last token present, so the span stays
// inside the source.
SourceSpan after(const Line& line) { return line.back().span; }

const Token& expect_token(const Line& line, std::size_t i, const std::string& what) {
  if (i >= line.size()) fail(after(line), "missing " + what, {what});
  return line[i];
}

void expect_keyword(const Line& line, std::size_t i, const std::string& kw) {
  const Token& t = expect_token(line, i, "'" + kw + "'");
  if (t.text != kw) fail(t.span, "unexpected '" + t.text + "'", {"'" + kw + "'"});
}

void expect_end(const Line& line, std::size_t i) {
  if (i < line.size()) fail(line[i].span, "unexpected trailing '" + line[i].text + "'", {"end of line"});
}

std::string expect_id(const Line& line, std::size_t i, const std::string& what) {
  const Token& t = expect_token(line, i, what);
  if (!is_valid_id(t.text)) fail(t.span, "'" + t.text + "' is not a valid " + what, {what});
  return t.text;
}

std::optional<Int> to_int(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

Int expect_int(const Line& line, std::size_t i, const std::string& what) {
  const Token& t = expect_token(line, i, what);
  auto v = to_int(t.text);
  if (!v) fail(t.span, "'" + t.text + "' is not a valid " + what, {what});
  return *v;
}

int expect_sign(const Line& line, std::size_t i) {
  const Token& t = expect_token(line, i, "sign");
  if (t.text == "+") return 1;
  if (t.text == "-") return -1;
  fail(t.span, "'" + t.text + "' is not a sign", {"'+'", "'-'"});
}

struct Atom {
  Letter letter;
  Int power;
  SourceSpan span;
};

// Parses tokens [first, last) as a word-expr.
std::vector<Atom> parse_word_expr(const Line& line, std::size_t first, std::size_t last) {
  if (first >= last) {
    SourceSpan s = first < line.size() ? line[first].span : after(line);
    fail(s, "missing word", {"word"});
  }
  if (line[first].text == "1") {
    if (last - first > 1) fail(line[first + 1].span, "the empty word '1' must stand alone", {"'framing'"});
    return {};
  }
  std::vector<Atom> atoms;
  for (std::size_t i = first; i < last; ++i) {
    const Token& t = line[i];
    std::string_view s = t.text;
    auto caret = s.find('^');
    std::string_view name = s.substr(0, caret);
    if (!is_valid_id(name)) fail(t.span, "'" + t.text + "' is not a generator atom", {"generator"});
    Int power = 1;
    if (caret != std::string_view::npos) {
      auto p = to_int(s.substr(caret + 1));
      if (!p) fail(t.span, "bad exponent in '" + t.text + "'", {"integer exponent"});
      if (*p > kMaxExponent || *p < -kMaxExponent) fail(t.span, "exponent out of range in '" + t.text + "'");
      power = *p;
    }
    atoms.push_back({{GeneratorId{std::string(name)}, power < 0 ? -1 : 1}, power < 0 ? -power : power, t.span});
  }
  return atoms;
}

FreeWord word_of(const std::vector<Atom>& atoms) {
  std::vector<Letter> raw;
  for (const auto& a : atoms)
    for (Int k = 0; k < a.power; ++k) raw.push_back(a.letter);
  return FreeWord::reduce(raw);
}

template <typename F>
auto guarded(F&& body) -> ParseResult<decltype(body())> {
  try {
    return body();
  } catch (const Failure& f) {
    return f.error;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

ParseResult<HandleDiagram> parse_diagram(std::string_view text) {
  return guarded([&]() -> HandleDiagram {
    HandleDiagram d;
    struct PendingHandle {
      std::vector<Atom> atoms;
    };
    struct PendingLink {
      Token a, b;
      Int value;
    };
    std::vector<PendingHandle> words;
    std::vector<PendingLink> links;
    std::map<HandleId, SourceSpan> handle_decl;
    std::set<GeneratorId> dot_decl;
    std::optional<SourceSpan> header, three, four;

    for (const Line& line : tokenize(text)) {
      if (line.empty()) continue;
      const Token& kw = line[0];
      if (kw.text == "diagram") {
        if (header) fail(kw.span, "duplicate 'diagram' header");
        header = kw.span;
        d.name = expect_id(line, 1, "diagram name");
        expect_end(line, 2);
      } else if (kw.text == "dots") {
        if (line.size() < 2) fail(after(line), "missing generator", {"generator"});
        for (std::size_t i = 1; i < line.size(); ++i) {
          GeneratorId g{expect_id(line, i, "generator")};
          if (!dot_decl.insert(g).second) fail(line[i].span, "duplicate dot '" + g.name + "'");
          d.dots.push_back(g);
        }
      } else if (kw.text == "handle") {
        HandleId id{expect_id(line, 1, "handle id")};
        if (handle_decl.count(id)) fail(line[1].span, "duplicate handle '" + id.name + "'");
        handle_decl[id] = line[1].span;
        expect_keyword(line, 2, "word");
        std::size_t f = 3;
        while (f < line.size() && line[f].text != "framing") ++f;
        if (f == line.size()) {
          expect_token(line, 3, "word");
          fail(after(line), "missing 'framing'", {"'framing'"});
        }
        auto atoms = parse_word_expr(line, 3, f);
        Int framing = expect_int(line, f + 1, "framing");
        expect_end(line, f + 2);
        d.handles.push_back({id, {}, framing});
        words.push_back({std::move(atoms)});
      } else if (kw.text == "link") {
        expect_id(line, 1, "handle id");
        expect_id(line, 2, "handle id");
        expect_keyword(line, 3, "=");
        Int v = expect_int(line, 4, "linking number");
        expect_end(line, 5);
        if (line[1].text == line[2].text) fail(line[2].span, "a handle cannot link itself; use its framing");
        links.push_back({line[1], line[2], v});
      } else if (kw.text == "threehandles") {
        if (three) fail(kw.span, "duplicate 'threehandles'");
        three = kw.span;
        Int n = expect_int(line, 1, "count");
        if (n < 0) fail(line[1].span, "3-handle count must be nonnegative", {"nonnegative integer"});
        expect_end(line, 2);
        d.n3 = n;
      } else if (kw.text == "fourhandles") {
        if (four) fail(kw.span, "duplicate 'fourhandles'");
        four = kw.span;
        Int n = expect_int(line, 1, "count");
        if (n != 0 && n != 1) fail(line[1].span, "4-handle count must be 0 or 1", {"'0'", "'1'"});
        expect_end(line, 2);
        d.n4 = n;
      } else {
        fail(kw.span, "unknown directive '" + kw.text + "'",
             {"'diagram'", "'dots'", "'handle'", "'link'", "'threehandles'", "'fourhandles'"});
      }
    }

    for (std::size_t i = 0; i < words.size(); ++i) {
      for (const Atom& a : words[i].atoms)
        if (!dot_decl.count(a.letter.gen)) fail(a.span, "unknown generator '" + a.letter.gen.name + "'", {"declared dot"});
      d.handles[i].word = word_of(words[i].atoms);
    }
    std::set<std::pair<HandleId, HandleId>> seen;
    for (const auto& l : links) {
      HandleId a{l.a.text}, b{l.b.text};
      if (!handle_decl.count(a)) fail(l.a.span, "unknown handle '" + a.name + "'", {"declared handle"});
      if (!handle_decl.count(b)) fail(l.b.span, "unknown handle '" + b.name + "'", {"declared handle"});
      auto key = a < b ? std::pair{a, b} : std::pair{b, a};
      if (!seen.insert(key).second) fail(l.a.span, "duplicate link for ('" + a.name + "', '" + b.name + "')");
      d.linking.set(a, b, l.value);
    }
    return d;
  });
}

ParseResult<MoveScript> parse_script(std::string_view text) {
  return guarded([&]() -> MoveScript {
    MoveScript script;
    for (const Line& line : tokenize(text)) {
      if (line.empty()) continue;
      const std::string& kw = line[0].text;
      if (kw == "slide") {
        HandleId i{expect_id(line, 1, "handle id")};
        expect_keyword(line, 2, "over");
        HandleId j{expect_id(line, 3, "handle id")};
        expect_keyword(line, 4, "sign");
        int s = expect_sign(line, 5);
        expect_keyword(line, 6, "band");
        FreeWord band = word_of(parse_word_expr(line, 7, line.size()));
        script.push_back(move::SlideHandle{i, j, s, band});
      } else if (kw == "slidedot") {
        GeneratorId a{expect_id(line, 1, "generator")};
        expect_keyword(line, 2, "over");
        GeneratorId b{expect_id(line, 3, "generator")};
        expect_keyword(line, 4, "sign");
        int s = expect_sign(line, 5);
        expect_end(line, 6);
        script.push_back(move::SlideDot{a, b, s});
      } else if (kw == "intro12" || kw == "cancel12") {
        GeneratorId g{expect_id(line, 1, "generator")};
        HandleId h{expect_id(line, 2, "handle id")};
        expect_end(line, 3);
        if (kw == "intro12") script.push_back(move::IntroducePair12{g, h});
        else script.push_back(move::CancelPair12{g, h});
      } else if (kw == "intro23" || kw == "cancel23") {
        HandleId h{expect_id(line, 1, "handle id")};
        expect_end(line, 2);
        if (kw == "intro23") script.push_back(move::IntroducePair23{h});
        else script.push_back(move::CancelPair23{h});
      } else if (kw == "zerotodot" || kw == "surger") {
        HandleId h{expect_id(line, 1, "handle id")};
        GeneratorId g{expect_id(line, 2, "generator")};
        expect_end(line, 3);
        if (kw == "zerotodot") script.push_back(move::ExchangeZeroToDot{h, g});
        else script.push_back(move::SurgerSphere{h, g});
      } else if (kw == "dottozero") {
        GeneratorId g{expect_id(line, 1, "generator")};
        HandleId h{expect_id(line, 2, "handle id")};
        expect_end(line, 3);
        script.push_back(move::ExchangeDotToZero{g, h});
      } else if (kw == "gluck") {
        HandleId s{expect_id(line, 1, "handle id")};
        expect_keyword(line, 2, "sign");
        int sign = expect_sign(line, 3);
        expect_end(line, 4);
        script.push_back(move::GluckTwist{s, sign});
      } else {
        fail(line[0].span, "unknown move '" + kw + "'",
             {"'slide'", "'slidedot'", "'intro12'", "'cancel12'", "'intro23'", "'cancel23'", "'zerotodot'",
              "'dottozero'", "'gluck'", "'surger'"});
      }
    }
    return script;
  });
}

ParseResult<SphericalClassCertificate> parse_certificate(std::string_view text) {
  return guarded([&]() -> SphericalClassCertificate {
    SphericalClassCertificate cert;
    for (const Line& line : tokenize(text)) {
      if (line.empty()) continue;
      if (line[0].text != "term") fail(line[0].span, "unknown directive '" + line[0].text + "'", {"'term'"});
      HandleId h{expect_id(line, 1, "handle id")};
      expect_keyword(line, 2, "sign");
      int s = expect_sign(line, 3);
      expect_keyword(line, 4, "conj");
      FreeWord u = word_of(parse_word_expr(line, 5, line.size()));
      cert.terms.push_back({h, s, u});
    }
    return cert;
  });
}

// ---------------------------------------------------------------------------

std::string format_word(const FreeWord& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  const auto& ls = w.letters();
  for (std::size_t i = 0; i < ls.size();) {
    std::size_t j = i;
    while (j < ls.size() && ls[j] == ls[i]) ++j;
    Int power = static_cast<Int>(j - i) * ls[i].sign;
    os << (i ? " " : "") << ls[i].gen.name;
    if (power != 1) os << '^' << power;
    i = j;
  }
  return os.str();
}

std::string serialize_diagram(const HandleDiagram& d) {
  std::ostringstream os;
  os << "diagram " << d.name << '\n';
  if (!d.dots.empty()) {
    os << "dots";
    for (const auto& g : d.dots) os << ' ' << g.name;
    os << '\n';
  }
  for (const auto& h : d.handles)
    os << "handle " << h.id.name << " word " << format_word(h.word) << " framing " << h.framing << '\n';
  for (std::size_t i = 0; i < d.handles.size(); ++i)
    for (std::size_t j = i + 1; j < d.handles.size(); ++j) {
      Int v = d.linking.get(d.handles[i].id, d.handles[j].id);
      if (v != 0) os << "link " << d.handles[i].id.name << ' ' << d.handles[j].id.name << " = " << v << '\n';
    }
  if (d.n3 != 0) os << "threehandles " << d.n3 << '\n';
  if (d.n4 != 0) os << "fourhandles " << d.n4 << '\n';
  return os.str();
}

namespace {

const char* sign_text(int s) { return s < 0 ? "-" : "+"; }

}  // namespace

std::string format_move(const Move& m) {
  return std::visit(
      [](const auto& mv) -> std::string {
        using T = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<T, move::SlideHandle>) {
          return "slide " + mv.handle.name + " over " + mv.over.name + " sign " + sign_text(mv.sign) + " band " +
                 format_word(mv.band);
        } else if constexpr (std::is_same_v<T, move::SlideDot>) {
          return "slidedot " + mv.dot.name + " over " + mv.over.name + " sign " + sign_text(mv.sign);
        } else if constexpr (std::is_same_v<T, move::IntroducePair12>) {
          return "intro12 " + mv.dot.name + " " + mv.handle.name;
        } else if constexpr (std::is_same_v<T, move::CancelPair12>) {
          return "cancel12 " + mv.dot.name + " " + mv.handle.name;
        } else if constexpr (std::is_same_v<T, move::IntroducePair23>) {
          return "intro23 " + mv.handle.name;
        } else if constexpr (std::is_same_v<T, move::CancelPair23>) {
          return "cancel23 " + mv.handle.name;
        } else if constexpr (std::is_same_v<T, move::ExchangeZeroToDot>) {
          return "zerotodot " + mv.handle.name + " " + mv.dot.name;
        } else if constexpr (std::is_same_v<T, move::ExchangeDotToZero>) {
          return "dottozero " + mv.dot.name + " " + mv.handle.name;
        } else if constexpr (std::is_same_v<T, move::GluckTwist>) {
          return "gluck " + mv.sphere.name + " sign " + sign_text(mv.sign);
        } else {
          return "surger " + mv.sphere.name + " " + mv.dot.name;
        }
      },
      m);
}

std::string format_script(const MoveScript& s) {
  std::string out;
  for (const auto& m : s) out += format_move(m) + '\n';
  return out;
}

std::string format_certificate(const SphericalClassCertificate& c) {
  std::string out;
  for (const auto& t : c.terms)
    out += "term " + t.handle.name + " sign " + sign_text(t.sign) + " conj " + format_word(t.conjugator) + '\n';
  return out;
}

}  // namespace kirby
