#include "pdc/system_text.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pdc {
namespace {

std::string product_text(const MomentProduct& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size();) {
    std::size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    out += '<' + p[i].name() + '>';
    if (j - i > 1) out += '^' + std::to_string(j - i);
    i = j;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip();
    return pos_ >= s_.size();
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::int64_t integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stoll(std::string(s_.substr(start, pos_ - start)));
  }
  Rational rational() {
    std::int64_t num = integer();
    if (accept('/')) return Rational(num, integer());
    return Rational(num);
  }
  Monomial moment() {
    expect('<');
    std::size_t end = s_.find('>', pos_);
    if (end == std::string_view::npos) fail("unterminated moment");
    Monomial m = Monomial::parse(s_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return m;
  }
  // "(re+im i)", "(im i)", "(-re-im i)"
  Coefficient gaussian() {
    expect('(');
    Coefficient c;
    bool first = true;
    while (!accept(')')) {
      bool neg = false;
      if (accept('-')) neg = true;
      else if (!first) expect('+');
      else accept('+');
      Rational r = rational();
      if (neg) r = -r;
      if (accept('i')) c.im += r;
      else c.re += r;
      first = false;
    }
    return c;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("parse error at offset " + std::to_string(pos_) + " (" + what + "): " +
                                std::string(s_));
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string format_poly(const MomentPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [prod, c] : p.terms()) {
    std::string coef;
    bool negative = false;
    if (c.is_real()) {
      negative = c.re < Rational(0);
      const Rational mag = negative ? -c.re : c.re;
      if (!(mag == Rational(1)) || prod.empty()) coef = mag.str();
    } else {
      coef = c.str();
    }
    std::string body = coef;
    if (!prod.empty()) body += (coef.empty() ? "" : "*") + product_text(prod);
    if (out.empty()) out = (negative ? "-" : "") + body;
    else out += (negative ? " - " : " + ") + body;
  }
  return out;
}

MomentPoly parse_poly(std::string_view text) {
  Reader r(text);
  MomentPoly out;
  if (r.peek() == '0') {
    r.integer();
    if (r.done()) return out;
    r.fail("trailing text after 0");
  }
  bool first = true;
  while (!r.done()) {
    bool neg = false;
    if (r.accept('-')) neg = true;
    else if (!first) r.expect('+');
    else r.accept('+');
    first = false;

    Coefficient coef(1);
    const char c = r.peek();
    if (c == '(') coef = r.gaussian();
    else if (std::isdigit(static_cast<unsigned char>(c))) coef = r.rational();
    MomentProduct prod;
    r.accept('*');
    while (r.peek() == '<') {
      Monomial m = r.moment();
      int k = 1;
      if (r.accept('^')) k = static_cast<int>(r.integer());
      for (int j = 0; j < k; ++j) prod.push_back(m);
      r.accept('*');
    }
    if (neg) coef = -coef;
    out.add(std::move(prod), coef);
  }
  return out;
}

std::string export_system(const MomentSystem& sys) {
  std::ostringstream os;
  for (const auto& a : sys.aliases) {
    const std::string m = '<' + a.moment.name() + '>';
    const std::string q = '<' + a.partner.name() + '>';
    os << "# " << m << " = " << m << "(0) + " << q << "(0) - " << q << '\n';
  }
  for (std::size_t k = 0; k < sys.size(); ++k)
    os << "d<" << sys.variables[k].name() << ">/dtau = " << format_poly(sys.rhs[k]) << '\n';
  return os.str();
}

MomentSystem parse_system(std::string_view text) {
  std::map<Monomial, MomentPoly> eqs;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    const auto lhs_open = line.find("d<", first);
    const auto lhs_close = line.find(">/dtau");
    if (eq == std::string::npos || lhs_open != first || lhs_close == std::string::npos || lhs_close > eq)
      throw std::invalid_argument("bad equation line: " + line);
    const Monomial v = Monomial::parse(std::string_view(line).substr(first + 2, lhs_close - first - 2));
    if (!eqs.emplace(v, parse_poly(std::string_view(line).substr(eq + 1))).second)
      throw std::invalid_argument("duplicate equation for <" + v.name() + ">");
  }
  MomentSystem sys;
  for (auto& [v, p] : eqs) {
    sys.variables.push_back(v);
    sys.rhs.push_back(std::move(p));
  }
  return sys;
}

}  // namespace pdc
