#pragma once

// Shared fixtures: random diagram and move generators, plus independent
// oracles (determinantal divisors, naive Smith reduction, Jacobi signature)
// that do not go through the library's Smith / congruence code.

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kirby/diagram.hpp"
#include "kirby/gluck.hpp"
#include "kirby/invariants.hpp"
#include "kirby/lang.hpp"
#include "kirby/matrix.hpp"
#include "kirby/moves.hpp"

namespace kirby::test {

inline std::string corpus_path(const std::string& name) { return std::string(KIRBY_CORPUS_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline HandleDiagram diagram(std::string_view text) {
  auto r = parse_diagram(text);
  if (auto* e = std::get_if<ParseError>(&r)) throw std::runtime_error("fixture: " + e->to_string());
  return std::get<HandleDiagram>(r);
}

inline HandleDiagram corpus_diagram(const std::string& name) { return diagram(read_file(corpus_path(name))); }

inline MoveScript script(std::string_view text) {
  auto r = parse_script(text);
  if (auto* e = std::get_if<ParseError>(&r)) throw std::runtime_error("fixture: " + e->to_string());
  return std::get<MoveScript>(r);
}

inline FreeWord word(std::string_view text, std::vector<std::string> dots) {
  std::string src = "dots";
  for (auto& d : dots) src += " " + d;
  src += "\nhandle w word " + std::string(text) + " framing 0\n";
  return diagram(src).handles.front().word;
}

inline HandleDiagram s2xs2() {
  return diagram("diagram X\nhandle S word 1 framing 0\nhandle K word 1 framing 0\nlink S K = 1\n");
}

// ---------------------------------------------------------------------------
// Random generation

struct RandomDiagramParams {
  int max_dots = 6;
  int max_handles = 10;
  Int max_abs_framing = 5;
  Int max_abs_linking = 5;
  int max_word_length = 6;
};

inline FreeWord random_word(std::mt19937_64& rng, const std::vector<GeneratorId>& dots, int max_len) {
  if (dots.empty()) return {};
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, dots.size() - 1);
  std::bernoulli_distribution coin;
  std::vector<Letter> raw;
  int n = len(rng);
  for (int i = 0; i < n; ++i) raw.push_back({dots[pick(rng)], coin(rng) ? 1 : -1});
  return FreeWord::reduce(raw);
}

inline HandleDiagram random_diagram(std::mt19937_64& rng, const RandomDiagramParams& p = {}) {
  HandleDiagram d;
  std::uniform_int_distribution<int> ndots(0, p.max_dots), nhandles(0, p.max_handles);
  std::uniform_int_distribution<Int> framing(-p.max_abs_framing, p.max_abs_framing);
  std::uniform_int_distribution<Int> link(-p.max_abs_linking, p.max_abs_linking);
  std::bernoulli_distribution sparse(0.5), has_three(0.2);
  int k = ndots(rng), n = nhandles(rng);
  for (int i = 0; i < k; ++i) d.dots.push_back({"a" + std::to_string(i)});
  for (int i = 0; i < n; ++i) d.handles.push_back({{"k" + std::to_string(i)}, random_word(rng, d.dots, p.max_word_length), framing(rng)});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (sparse(rng)) d.linking.set(d.handles[i].id, d.handles[j].id, link(rng));
  if (has_three(rng)) d.n3 = 1;
  return d;
}

/// Forces handle 0 to be a 0-framed trivial-word handle (adding one if the
/// diagram has none) and returns its id.
inline HandleId plant_sphere(HandleDiagram& d) {
  if (d.handles.empty()) d.handles.push_back({{"k0"}, {}, 0});
  d.handles[0].word = {};
  d.handles[0].framing = 0;
  return d.handles[0].id;
}

/// A random move from the handle-move set (no exchanges, twists or surgeries)
/// that applies to d.
inline Move random_handle_move(std::mt19937_64& rng, const HandleDiagram& d) {
  std::vector<Move> options;
  std::bernoulli_distribution coin;
  auto sign = [&] { return coin(rng) ? 1 : -1; };
  const std::size_t n = d.handles.size();
  for (int tries = 0; tries < 3 && n >= 2; ++tries) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    options.push_back(move::SlideHandle{d.handles[i].id, d.handles[j].id, sign(), random_word(rng, d.dots, 2)});
  }
  if (d.dots.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, d.dots.size() - 1);
    std::size_t a = pick(rng), b = pick(rng);
    if (a != b) options.push_back(move::SlideDot{d.dots[a], d.dots[b], sign()});
  }
  options.push_back(move::IntroducePair12{fresh_generator_id(d, "p"), fresh_handle_id(d, "q")});
  options.push_back(move::IntroducePair23{fresh_handle_id(d, "t")});
  for (const auto& h : d.handles) {
    if (h.word.size() == 1) {
      options.push_back(move::CancelPair12{h.word.letters().front().gen, h.id});
      options.push_back(move::CancelPair12{h.word.letters().front().gen, h.id});
    }
    if (d.n3 > 0 && h.word.empty() && h.framing == 0) {
      bool linked = std::any_of(d.handles.begin(), d.handles.end(),
                                [&](const TwoHandle& m) { return d.linking.get(h.id, m.id) != 0; });
      if (!linked) options.push_back(move::CancelPair23{h.id});
    }
  }
  std::uniform_int_distribution<std::size_t> choose(0, options.size() - 1);
  return options[choose(rng)];
}

/// Rewrites some words of d so that a freely trivial certificate exists, and
/// returns one: trivial-word handles with random conjugators, plus adjacent
/// pairs (a, +-1, u), (b, -+1, u) of handles given equal words.
inline SphericalClassCertificate random_certificate(std::mt19937_64& rng, HandleDiagram& d) {
  SphericalClassCertificate cert;
  if (d.handles.empty()) return cert;
  std::bernoulli_distribution coin;
  std::uniform_int_distribution<std::size_t> pick(0, d.handles.size() - 1);
  std::uniform_int_distribution<int> nterms(1, 4);
  for (auto& h : d.handles)
    if (coin(rng)) h.word = {};
  for (int k = nterms(rng); k > 0; --k) {
    int s = coin(rng) ? 1 : -1;
    auto u = random_word(rng, d.dots, 2);
    auto& a = d.handles[pick(rng)];
    if (a.word.empty()) {
      cert.terms.push_back({a.id, s, u});
      continue;
    }
    auto& b = d.handles[pick(rng)];
    if (&a == &b) {
      a.word = {};
      cert.terms.push_back({a.id, s, u});
      continue;
    }
    b.word = a.word;
    cert.terms.push_back({a.id, s, u});
    cert.terms.push_back({b.id, -s, u});
  }
  // earlier terms may have lost their trivial word to a later pair
  if (!certificate_word(d, cert).empty()) {
    for (const auto& t : cert.terms) d.handle(t.handle).word = {};
  }
  return cert;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int bound) {
  std::uniform_int_distribution<int> e(-bound, bound);
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = e(rng);
  return m;
}

// ---------------------------------------------------------------------------
// Oracles

/// Laplace expansion along the first row.  Exponential; for n <= 6 only.
inline BigInt laplace_det(const std::vector<std::vector<BigInt>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  BigInt total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c] == 0) continue;
    std::vector<std::vector<BigInt>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<BigInt> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(std::move(row));
    }
    BigInt term = a[0][c] * laplace_det(minor);
    total += (c % 2 == 0) ? term : BigInt(-term);
  }
  return total;
}

inline void combinations(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

/// Invariant factors from determinantal divisors: s_k = D_k / D_{k-1},
/// D_k = gcd of all k x k minors.  Returns min(rows, cols) entries.
inline std::vector<BigInt> determinantal_invariant_factors(const IntMatrix& m) {
  const std::size_t lim = std::min(m.rows(), m.cols());
  std::vector<BigInt> out;
  BigInt prev = 1;
  bool zero_from_here = false;
  for (std::size_t k = 1; k <= lim; ++k) {
    if (zero_from_here) {
      out.push_back(0);
      continue;
    }
    std::vector<std::vector<std::size_t>> rs, cs;
    combinations(m.rows(), k, rs);
    combinations(m.cols(), k, cs);
    BigInt g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        std::vector<std::vector<BigInt>> sub(k, std::vector<BigInt>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = m(r[i], c[j]);
        BigInt det = abs(laplace_det(sub));
        g = boost::multiprecision::gcd(g, det);
      }
    if (g == 0) {
      zero_from_here = true;
      out.push_back(0);
      continue;
    }
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

/// Textbook Smith reduction on plain big integers: pivot on the first nonzero
/// entry, Euclid by repeated row/column subtraction, fix divisibility at the
/// end by the gcd/lcm sweep.  Returns the min(rows, cols) diagonal.
inline std::vector<BigInt> naive_smith_diagonal(const IntMatrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::vector<BigInt>> a(R, std::vector<BigInt>(C));
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t c = 0; c < C; ++c) a[r][c] = m(r, c);
  const std::size_t lim = std::min(R, C);
  for (std::size_t t = 0; t < lim; ++t) {
    for (;;) {
      std::size_t pr = R, pc = C;
      for (std::size_t r = t; r < R && pr == R; ++r)
        for (std::size_t c = t; c < C; ++c)
          if (a[r][c] != 0) {
            pr = r;
            pc = c;
            break;
          }
      if (pr == R) break;
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);
      bool again = false;
      for (std::size_t r = t + 1; r < R; ++r) {
        BigInt q = a[r][t] / a[t][t];
        for (std::size_t c = t; c < C; ++c) a[r][c] -= q * a[t][c];
        if (a[r][t] != 0) {
          std::swap(a[t], a[r]);
          again = true;
        }
      }
      for (std::size_t c = t + 1; c < C; ++c) {
        BigInt q = a[t][c] / a[t][t];
        for (std::size_t r = t; r < R; ++r) a[r][c] -= q * a[r][t];
        if (a[t][c] != 0) {
          for (auto& row : a) std::swap(row[t], row[c]);
          again = true;
        }
      }
      if (!again) break;
    }
  }
  std::vector<BigInt> d(lim);
  for (std::size_t i = 0; i < lim; ++i) d[i] = abs(a[i][i]);
  // gcd/lcm sweep restores the divisibility chain without changing the group
  for (std::size_t i = 0; i < lim; ++i)
    for (std::size_t j = i + 1; j < lim; ++j) {
      BigInt x = d[i], y = d[j];
      BigInt g = boost::multiprecision::gcd(x, y);
      BigInt l = (x == 0 || y == 0) ? BigInt(0) : BigInt(x / g * y);
      if (x == 0 && y != 0) {
        d[i] = y;
        d[j] = 0;
      } else {
        d[i] = g;
        d[j] = l;
      }
    }
  return d;
}

/// Signature from the signs of leading principal minors (Jacobi), valid when
/// every leading minor is nonzero.  Returns false if that fails.
inline bool jacobi_signature(const IntMatrix& g, long& signature) {
  const std::size_t n = g.rows();
  BigInt prev = 1;
  signature = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = g(i, j);
    BigInt det = determinant(sub);
    if (det == 0) return false;
    signature += ((det > 0) == (prev > 0)) ? 1 : -1;
    prev = det;
  }
  return true;
}

/// Brute force: is there x with entries in [-2, 2] and odd x^T G x?
inline bool brute_force_odd(const IntMatrix& g) {
  const std::size_t n = g.rows();
  std::vector<int> x(n, -2);
  for (;;) {
    BigInt q = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q += BigInt(x[i]) * g(i, j) * x[j];
    if (q % 2 != 0) return true;
    std::size_t i = 0;
    while (i < n && x[i] == 2) x[i++] = -2;
    if (i == n) return false;
    ++x[i];
  }
}

/// c^T L c evaluated directly from the diagram's framings and linkings.
inline BigInt quadratic_value(const HandleDiagram& d, const std::vector<Int>& c) {
  BigInt q = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) q += BigInt(c[i]) * d.gram(d.handles[i].id, d.handles[j].id) * c[j];
  return q;
}

inline IntMatrix e8() {
  // Cartan matrix of E8 (Bourbaki labelling); the branch node is row 3
  return IntMatrix{{2, -1, 0, 0, 0, 0, 0, 0},  {-1, 2, -1, 0, 0, 0, 0, 0}, {0, -1, 2, -1, 0, 0, 0, -1},
                   {0, 0, -1, 2, -1, 0, 0, 0},  {0, 0, 0, -1, 2, -1, 0, 0}, {0, 0, 0, 0, -1, 2, -1, 0},
                   {0, 0, 0, 0, 0, -1, 2, 0},   {0, 0, -1, 0, 0, 0, 0, 2}};
}

}  // namespace kirby::test
