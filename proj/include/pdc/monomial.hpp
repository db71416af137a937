#ifndef PDC_MONOMIAL_HPP
#define PDC_MONOMIAL_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace pdc {

enum class Mode : int { pump = 0, signal = 1, idler = 2 };

/// Normal-ordered product (ap')^c ap^d (as')^e as^f (ai')^g ai^h.
/// Slot 2*mode holds the creation power, slot 2*mode+1 the annihilation power.
struct Monomial {
  std::array<int, 6> pow{};

  Monomial() = default;
  Monomial(int c, int d, int e, int f, int g, int h) : pow{c, d, e, f, g, h} {}

  static Monomial lowering(Mode m, int k = 1);
  static Monomial raising(Mode m, int k = 1);
  static Monomial number(Mode m);

  int create(Mode m) const { return pow[2 * static_cast<int>(m)]; }
  int destroy(Mode m) const { return pow[2 * static_cast<int>(m) + 1]; }
  int order() const;
  bool is_identity() const { return order() == 0; }
  /// Daggers equal non-daggers in every mode, so the expectation is phase-free.
  bool is_balanced() const;

  Monomial conj() const;
  Monomial swap_signal_idler() const;
  /// Representative of {m, m^dagger}: the lexicographically smaller tuple.
  Monomial conj_rep() const;
  bool is_conj_rep() const { return *this == conj_rep(); }

  /// Product of two monomials whose modes do not overlap (no reordering needed).
  Monomial operator*(const Monomial& o) const;

  /// Graded lexicographic: lower order first, then tuple order.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;

  /// Text form without brackets, e.g. "ap'^2 as ai"; identity is "1".
  std::string name() const;
  /// Inverse of name(); throws std::invalid_argument.
  static Monomial parse(std::string_view text);
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::size_t h = 0;
    for (int p : m.pow) h = h * 131 + static_cast<std::size_t>(p);
    return h;
  }
};

}  // namespace pdc

#endif  // PDC_MONOMIAL_HPP
