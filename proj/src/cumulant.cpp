#include "pdc/cumulant.hpp"

#include <stdexcept>
#include <vector>

namespace pdc {
namespace {

std::vector<int> operator_slots(const Monomial& m) {
  std::vector<int> out;
  for (int s = 0; s < 6; ++s)
    for (int k = 0; k < m.pow[s]; ++k) out.push_back(s);
  return out;
}

template <class Visit>
void for_each_partition(int n, Visit&& visit) {
  // restricted growth strings: block[i] <= 1 + max(block[0..i-1])
  std::vector<int> block(n, 0), prefix_max(n, 0);
  while (true) {
    visit(block, prefix_max[n - 1] + 1);
    int i = n - 1;
    while (i > 0 && block[i] > prefix_max[i - 1]) --i;
    if (i == 0) return;
    ++block[i];
    prefix_max[i] = std::max(prefix_max[i - 1], block[i]);
    for (int j = i + 1; j < n; ++j) {
      block[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

}  // namespace

MomentPoly cumulant_expand(const Monomial& m) {
  const std::vector<int> slots = operator_slots(m);
  const int n = static_cast<int>(slots.size());
  MomentPoly out;
  if (n < 2) return MomentPoly::moment(m);
  for_each_partition(n, [&](const std::vector<int>& block, int nblocks) {
    if (nblocks == 1) return;
    MomentProduct prod(nblocks);
    for (int i = 0; i < n; ++i) ++prod[block[i]].pow[slots[i]];
    std::int64_t w = 1;
    for (int k = 2; k < nblocks; ++k) w *= k;
    if (nblocks % 2) w = -w;
    out.add(std::move(prod), Rational(w));
  });
  return out;
}

MomentPoly cumulant_truncate(const OperatorPoly& p, int n) {
  if (n < 1) throw std::invalid_argument("cumulant_truncate: order must be >= 1");
  MomentPoly out;
  for (const auto& [m, c] : p.terms()) {
    const int o = m.order();
    if (o > n + 1)
      throw std::invalid_argument("cumulant_truncate: moment <" + m.name() + "> exceeds order " +
                                  std::to_string(n + 1));
    if (o == n + 1)
      out += cumulant_expand(m) * c;
    else
      out += MomentPoly::moment(m, c);
  }
  return out;
}

MomentPoly express_moment(const Monomial& m, int n) {
  if (n < 1) throw std::invalid_argument("express_moment: order must be >= 1");
  if (m.order() <= n) return MomentPoly::moment(m);
  return cumulant_expand(m).substitute([n](const Monomial& b) { return express_moment(b, n); });
}

}  // namespace pdc
