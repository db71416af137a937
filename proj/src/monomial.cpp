#include "pdc/monomial.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pdc {
namespace {

constexpr const char* kModeTag[3] = {"ap", "as", "ai"};

}  // namespace

Monomial Monomial::lowering(Mode m, int k) {
  Monomial r;
  r.pow[2 * static_cast<int>(m) + 1] = k;
  return r;
}

Monomial Monomial::raising(Mode m, int k) {
  Monomial r;
  r.pow[2 * static_cast<int>(m)] = k;
  return r;
}

Monomial Monomial::number(Mode m) {
  Monomial r;
  r.pow[2 * static_cast<int>(m)] = 1;
  r.pow[2 * static_cast<int>(m) + 1] = 1;
  return r;
}

int Monomial::order() const { return std::accumulate(pow.begin(), pow.end(), 0); }

bool Monomial::is_balanced() const {
  return pow[0] == pow[1] && pow[2] == pow[3] && pow[4] == pow[5];
}

Monomial Monomial::conj() const {
  return {pow[1], pow[0], pow[3], pow[2], pow[5], pow[4]};
}

Monomial Monomial::swap_signal_idler() const {
  return {pow[0], pow[1], pow[4], pow[5], pow[2], pow[3]};
}

Monomial Monomial::conj_rep() const {
  const Monomial c = conj();
  return c.pow < pow ? c : *this;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (int s = 0; s < 6; s += 2) {
    if (pow[s + 1] && o.pow[s])
      throw std::logic_error("Monomial::operator*: overlapping mode needs normal_order_product");
    r.pow[s] = pow[s] + o.pow[s];
    r.pow[s + 1] = pow[s + 1] + o.pow[s + 1];
  }
  return r;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (auto c = a.order() <=> b.order(); c != 0) return c;
  return a.pow <=> b.pow;
}

std::string Monomial::name() const {
  std::string out;
  for (int mode = 0; mode < 3; ++mode) {
    for (int dag = 1; dag >= 0; --dag) {
      const int p = pow[2 * mode + (dag ? 0 : 1)];
      if (!p) continue;
      if (!out.empty()) out += ' ';
      out += kModeTag[mode];
      if (dag) out += '\'';
      if (p > 1) out += '^' + std::to_string(p);
    }
  }
  return out.empty() ? "1" : out;
}

Monomial Monomial::parse(std::string_view text) {
  Monomial m;
  std::istringstream in{std::string(text)};
  std::string tok;
  int last_slot = -1;
  while (in >> tok) {
    if (tok == "1") continue;
    if (tok.size() < 2 || tok[0] != 'a') throw std::invalid_argument("bad operator token: " + tok);
    int mode = -1;
    if (tok[1] == 'p') mode = 0;
    else if (tok[1] == 's') mode = 1;
    else if (tok[1] == 'i') mode = 2;
    if (mode < 0) throw std::invalid_argument("bad mode in token: " + tok);
    std::size_t pos = 2;
    const bool dag = pos < tok.size() && tok[pos] == '\'';
    if (dag) ++pos;
    int power = 1;
    if (pos < tok.size()) {
      if (tok[pos] != '^') throw std::invalid_argument("bad power in token: " + tok);
      power = std::stoi(tok.substr(pos + 1));
      if (power < 1) throw std::invalid_argument("bad power in token: " + tok);
    }
    const int slot = 2 * mode + (dag ? 0 : 1);
    if (slot <= last_slot) throw std::invalid_argument("operators not in canonical normal order: " + std::string(text));
    last_slot = slot;
    m.pow[slot] = power;
  }
  return m;
}

}  // namespace pdc
