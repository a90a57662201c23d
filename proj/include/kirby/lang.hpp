#pragma once

// Line-oriented text formats.
//
// Diagrams (.kd):
//   # comment
//   diagram <name>
//   dots <id> <id> ...
//   handle <id> word <word-expr> framing <int>
//   link <id> <id> = <int>
//   threehandles <int>
//   fourhandles <0|1>
// A word-expr is `1` or whitespace-separated atoms `a`, `a^-1`, `a^3`.
//
// Scripts (.ks), one move per line:
//   slide <i> over <j> sign <+|-> band <word-expr>
//   slidedot <a> over <b> sign <+|->
//   intro12 <g> <h>      cancel12 <g> <h>
//   intro23 <h>          cancel23 <h>
//   zerotodot <h> <g>    dottozero <g> <h>
//   gluck <S> sign <+|-> surger <S> <g>
//
// Certificates, one term per line:
//   term <handle> sign <+|-> conj <word-expr>

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kirby/diagram.hpp"
#include "kirby/gluck.hpp"
#include "kirby/moves.hpp"

namespace kirby {

struct SourceSpan {
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based
  std::size_t length = 1;
  bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;

  /// `line:col: message (expected ...)`
  std::string to_string() const;
};

template <typename T>
using ParseResult = std::variant<T, ParseError>;

ParseResult<HandleDiagram> parse_diagram(std::string_view text);
ParseResult<MoveScript> parse_script(std::string_view text);
ParseResult<SphericalClassCertificate> parse_certificate(std::string_view text);

/// Deterministic text form; parse_diagram(serialize_diagram(d)) == d.
/// Dots and handles keep their stored order; links are listed once per pair.
std::string serialize_diagram(const HandleDiagram& d);

std::string format_word(const FreeWord& w);
std::string format_move(const Move& m);
std::string format_script(const MoveScript& s);
std::string format_certificate(const SphericalClassCertificate& c);

}  // namespace kirby
