#pragma once
// Farey fractions, superbases and reduced words in the free group <a, b>.
// Words are strings over {a, A, b, B}; a capital letter is the inverse.

#include <array>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace margulis {

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}

}  // namespace detail

struct FareyFraction {
  std::int64_t p = 1, q = 0;

  FareyFraction() = default;
  FareyFraction(std::int64_t p_, std::int64_t q_) : p(p_), q(q_) {
    if (p == 0 && q == 0) throw std::domain_error("0/0 is not a fraction");
    const std::int64_t g = std::gcd(p, q);
    p /= g;
    q /= g;
    if (q < 0 || (q == 0 && p < 0)) {
      p = -p;
      q = -q;
    }
  }
  friend bool operator==(const FareyFraction&, const FareyFraction&) = default;
  friend auto operator<=>(const FareyFraction&, const FareyFraction&) = default;

  std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }
};

inline std::int64_t intersection_number(const FareyFraction& x, const FareyFraction& y) {
  const std::int64_t d = detail::checked_sub(detail::checked_mul(x.p, y.q), detail::checked_mul(y.p, x.q));
  return d < 0 ? -d : d;
}

inline bool are_neighbors(const FareyFraction& x, const FareyFraction& y) {
  return intersection_number(x, y) == 1;
}

inline std::pair<FareyFraction, FareyFraction> farey_children(const FareyFraction& x,
                                                              const FareyFraction& y) {
  if (!are_neighbors(x, y)) throw std::domain_error("farey_children: not Farey neighbors");
  using detail::checked_add;
  using detail::checked_sub;
  return {FareyFraction(checked_add(x.p, y.p), checked_add(x.q, y.q)),
          FareyFraction(checked_sub(x.p, y.p), checked_sub(x.q, y.q))};
}

enum class Mod2Class { infinity, zero, one };

inline const char* to_string(Mod2Class c) {
  switch (c) {
    case Mod2Class::infinity: return "inf";
    case Mod2Class::zero: return "0";
    case Mod2Class::one: return "1";
  }
  return "?";
}

inline Mod2Class mod2_class(const FareyFraction& x) {
  const bool po = (x.p % 2) != 0, qo = (x.q % 2) != 0;
  if (po && !qo) return Mod2Class::infinity;
  if (!po && qo) return Mod2Class::zero;
  if (po && qo) return Mod2Class::one;
  throw std::domain_error("mod2_class: fraction is not reduced");
}

using FareyTriple = std::array<FareyFraction, 3>;

inline bool is_farey_triple(const FareyTriple& t) {
  return are_neighbors(t[0], t[1]) && are_neighbors(t[1], t[2]) && are_neighbors(t[0], t[2]);
}

// Positions carry the classes (inf, 0, 1).
inline FareyTriple canonical_order(const FareyTriple& t) {
  FareyTriple out;
  std::array<bool, 3> seen{};
  for (const auto& x : t) {
    const int k = static_cast<int>(mod2_class(x));
    if (seen[k]) throw std::domain_error("canonical_order: repeated mod-2 class");
    seen[k] = true;
    out[k] = x;
  }
  return out;
}

// ---- words ----

inline char inverse_letter(char c) {
  switch (c) {
    case 'a': return 'A';
    case 'A': return 'a';
    case 'b': return 'B';
    case 'B': return 'b';
  }
  throw std::domain_error(std::string("invalid letter '") + c + "'");
}

inline std::string reduce(const std::string& w) {
  std::string out;
  for (char c : w) {
    const char ic = inverse_letter(c);
    if (!out.empty() && out.back() == ic)
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

inline bool is_reduced(const std::string& w) { return reduce(w) == w; }

inline std::string inverse_word(const std::string& w) {
  std::string out(w.rbegin(), w.rend());
  for (char& c : out) c = inverse_letter(c);
  return out;
}

inline std::pair<std::int64_t, std::int64_t> abelianize(const std::string& w) {
  std::int64_t x = 0, y = 0;
  for (char c : w) {
    switch (c) {
      case 'a': ++x; break;
      case 'A': --x; break;
      case 'b': ++y; break;
      case 'B': --y; break;
      default: throw std::domain_error("abelianize: invalid letter");
    }
  }
  return {x, y};
}

// Projective class p/q of a primitive word: p counts a, q counts b.
inline FareyFraction word_fraction(const std::string& w) {
  const auto [x, y] = abelianize(w);
  return FareyFraction(x, y);
}

struct BasicTriple {
  std::array<std::string, 3> w;  // A, B, C

  const std::string& A() const { return w[0]; }
  const std::string& B() const { return w[1]; }
  const std::string& C() const { return w[2]; }

  bool valid() const {
    for (const auto& x : w)
      if (!is_reduced(x) || x.empty()) return false;
    if (!reduce(w[0] + w[1] + w[2]).empty()) return false;
    const auto [a1, a2] = abelianize(w[0]);
    const auto [b1, b2] = abelianize(w[1]);
    const std::int64_t d = a1 * b2 - a2 * b1;
    return d == 1 || d == -1;
  }
  FareyTriple label() const { return {word_fraction(w[0]), word_fraction(w[1]), word_fraction(w[2])}; }
  friend bool operator==(const BasicTriple&, const BasicTriple&) = default;
};

inline BasicTriple base_triple() { return {{"a", "b", "BA"}}; }

// (A,B,C) -> (B,C,A); the involution triple rotates the same way.
inline BasicTriple rotate(const BasicTriple& t, int k) {
  k = ((k % 3) + 3) % 3;
  return {{t.w[k], t.w[(k + 1) % 3], t.w[(k + 2) % 3]}};
}

// Replace the slot word by its Farey partner; slot 2 is (A,B,C) -> (B^-1, A, A^-1 B).
inline BasicTriple flip(const BasicTriple& t, int slot) {
  if (!t.valid()) throw std::domain_error("flip: invalid basic triple");
  if (slot < 0 || slot > 2) throw std::domain_error("flip: slot must be 0, 1 or 2");
  const BasicTriple r = rotate(t, slot + 1);
  return {{inverse_word(r.w[1]), r.w[0], reduce(inverse_word(r.w[0]) + r.w[1])}};
}

struct TreeNode {
  FareyTriple label;
  BasicTriple words;
  int parent = -1;
  int slot = -1;   // slot of the parent that was flipped
  int depth = 0;
};

namespace detail {
inline std::set<FareyFraction> label_key(const FareyTriple& t) { return {t[0], t[1], t[2]}; }
}  // namespace detail

// Breadth-first ball of the given radius around the base superbasis.
inline std::vector<TreeNode> enumerate_tree(int depth) {
  if (depth < 0) throw std::domain_error("enumerate_tree: negative depth");
  std::vector<TreeNode> nodes;
  std::set<std::set<FareyFraction>> seen;
  const BasicTriple b = base_triple();
  nodes.push_back({b.label(), b, -1, -1, 0});
  seen.insert(detail::label_key(nodes[0].label));
  std::vector<int> frontier{0};
  for (int d = 0; d < depth; ++d) {
    std::vector<int> next;
    for (int i : frontier) {
      for (int slot = 0; slot < 3; ++slot) {
        const BasicTriple child = flip(nodes[i].words, slot);
        const FareyTriple lab = child.label();
        if (!seen.insert(detail::label_key(lab)).second) continue;
        nodes.push_back({lab, child, i, slot, d + 1});
        next.push_back(static_cast<int>(nodes.size()) - 1);
      }
    }
    frontier = std::move(next);
  }
  return nodes;
}

}  // namespace margulis
