#include "poly.hpp"

#include <boost/multiprecision/integer.hpp>
#include <cmath>
#include <numbers>

#include "eqpl/semantics.hpp"

namespace eqpl::detail {
namespace {

using boost::multiprecision::cpp_int;

std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  const cpp_int n = numerator(r), d = denominator(r);
  const cpp_int sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) return std::nullopt;
  return Rational(sn, sd);
}

std::pair<Rational, Rational> enclosure(double d) {
  const double delta = 1e-9 * std::max(1.0, std::abs(d));
  return {Rational(d - delta), Rational(d + delta)};
}

bool closed(const Node& n) {
  if (n.kind == Kind::RealVar || n.kind == Kind::CVar || n.kind == Kind::Meta) return false;
  for (const auto& a : n.args)
    if (!closed(*a)) return false;
  return true;
}

double closed_value(const Node& t) {
  Assignment none;
  return Evaluator(nullptr, none).real(t);
}

}  // namespace

std::string show(const Node& n) { return render(std::make_shared<Node>(n)); }

bool PolyBuilder::uses_opaque() const {
  for (const auto& s : symbols_)
    if (s.type == SymbolInfo::Type::Opaque) return true;
  return false;
}

int PolyBuilder::symbol(SymbolInfo info) {
  auto [it, fresh] = by_key_.emplace(info.key, static_cast<int>(symbols_.size()));
  if (fresh) symbols_.push_back(std::move(info));
  return it->second;
}

Poly PolyBuilder::constant(const Rational& c) {
  Poly p;
  if (c != 0) p[{}] = c;
  return p;
}

std::optional<Rational> PolyBuilder::as_constant(const Poly& p) {
  if (p.empty()) return Rational(0);
  if (p.size() == 1 && p.begin()->first.empty()) return p.begin()->second;
  return std::nullopt;
}

Poly PolyBuilder::add(const Poly& a, const Poly& b) const {
  Poly r = a;
  for (const auto& [m, c] : b) {
    Rational& x = r[m];
    x += c;
    if (x == 0) r.erase(m);
  }
  return r;
}

Poly PolyBuilder::sub(const Poly& a, const Poly& b) const {
  Poly nb;
  for (const auto& [m, c] : b) nb[m] = -c;
  return add(a, nb);
}

// c * m with every symbol^2 that has a square rule rewritten.
Poly PolyBuilder::reduce(const Monomial& m, const Rational& c) const {
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& [s, p] = m[i];
    if (p < 2 || !symbols_[s].square) continue;
    Monomial rest = m;
    if (p % 2)
      rest[i].second = 1;
    else
      rest.erase(rest.begin() + static_cast<long>(i));
    Poly out = reduce(rest, c);
    for (int k = 0; k < p / 2; ++k) out = mul(out, *symbols_[s].square);
    return out;
  }
  return c == 0 ? Poly{} : Poly{{m, c}};
}

Poly PolyBuilder::mul(const Poly& a, const Poly& b) const {
  Poly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m;
      std::size_t i = 0, j = 0;
      while (i < ma.size() || j < mb.size()) {
        if (j == mb.size() || (i < ma.size() && ma[i].first < mb[j].first))
          m.push_back(ma[i++]);
        else if (i == ma.size() || mb[j].first < ma[i].first)
          m.push_back(mb[j++]);
        else {
          m.emplace_back(ma[i].first, ma[i].second + mb[j].second);
          ++i;
          ++j;
        }
      }
      r = add(r, reduce(m, ca * cb));
    }
  return r;
}

Poly PolyBuilder::opaque_constant(const Node& t, const std::string& key, bool nonnegative) {
  const double v = closed_value(t);
  if (!std::isfinite(v)) throw NotArithmetical("undefined constant " + key);
  SymbolInfo info{SymbolInfo::Type::Opaque, 0, key, std::nullopt, nonnegative, enclosure(v)};
  return var(symbol(std::move(info)));
}

Poly PolyBuilder::real(const Node& t) {
  const auto& a = t.args;
  switch (t.kind) {
    case Kind::RealVar:
      return var(symbol({SymbolInfo::Type::RealVar, t.index, "x" + std::to_string(t.index), std::nullopt, false, std::nullopt}));
    case Kind::Num: return constant(parse_decimal(t.text));
    case Kind::Pi:
    case Kind::Euler: return opaque_constant(t, show(t), true);
    case Kind::Sqrt: {
      const Poly c = real(*a[0]);
      if (auto r = as_constant(c)) {
        if (*r < 0) throw NotArithmetical("square root of a negative constant");
        if (auto s = exact_sqrt(*r)) return constant(*s);
        const double v = std::sqrt(static_cast<double>(*r));
        SymbolInfo info{SymbolInfo::Type::Opaque, 0, "sqrt(" + r->str() + ")", constant(*r), true, enclosure(v)};
        return var(symbol(std::move(info)));
      }
      return opaque_constant(t, show(t), true);
    }
    case Kind::Div: {
      const Poly num = real(*a[0]), den = real(*a[1]);
      if (auto d = as_constant(den)) {
        if (*d == 0) throw NotArithmetical("division by zero");
        return mul(num, constant(1 / *d));
      }
      // c * s with s^2 = q constant: num / (c s) = num * s / (c q).
      if (den.size() == 1) {
        const auto& [m, c] = *den.begin();
        if (m.size() == 1 && m[0].second == 1 && symbols_[m[0].first].square)
          if (auto q = as_constant(*symbols_[m[0].first].square); q && *q != 0)
            return mul(mul(num, var(m[0].first)), constant(1 / (c * *q)));
      }
      if (closed(t)) return opaque_constant(t, show(t), false);
      throw NotArithmetical("division by a non-constant");
    }
    case Kind::RAdd: return add(real(*a[0]), real(*a[1]));
    case Kind::RMul: return mul(real(*a[0]), real(*a[1]));
    case Kind::Re: return complex(*a[0]).first;
    case Kind::Im: return complex(*a[0]).second;
    case Kind::Arg: {
      complex(*a[0]);  // arguments must be arithmetical too
      if (closed(t)) return opaque_constant(t, show(t), false);
      const Rational bound(31416, 10000);
      return var(symbol({SymbolInfo::Type::Opaque, 0, show(t), std::nullopt, false, std::pair{-bound, bound}}));
    }
    case Kind::Abs: {
      auto [re, im] = complex(*a[0]);
      SymbolInfo info{SymbolInfo::Type::Opaque, 0, show(t), add(mul(re, re), mul(im, im)), true, std::nullopt};
      if (closed(t)) info.interval = enclosure(closed_value(t));
      return var(symbol(std::move(info)));
    }
    default: throw NotArithmetical("not an arithmetical real term: " + show(t));
  }
}

std::pair<Poly, Poly> PolyBuilder::complex(const Node& u) {
  const auto& a = u.args;
  switch (u.kind) {
    case Kind::CVar:
      return {var(symbol({SymbolInfo::Type::ReZ, u.index, "re(z" + std::to_string(u.index) + ")", std::nullopt, false, std::nullopt})),
              var(symbol({SymbolInfo::Type::ImZ, u.index, "im(z" + std::to_string(u.index) + ")", std::nullopt, false, std::nullopt}))};
    case Kind::Cart: return {real(*a[0]), real(*a[1])};
    case Kind::Polar: {
      const Poly r = real(*a[0]), theta = real(*a[1]);
      if (auto t0 = as_constant(theta); t0 && *t0 == 0) return {r, {}};
      const std::string key = render(a[1]);
      SymbolInfo cos_info{SymbolInfo::Type::Opaque, 0, "cos(" + key + ")", std::nullopt, false,
                          std::pair{Rational(-1), Rational(1)}};
      SymbolInfo sin_info = cos_info;
      sin_info.key = "sin(" + key + ")";
      if (closed(*a[1])) {
        const double th = closed_value(*a[1]);
        cos_info.interval = enclosure(std::cos(th));
        sin_info.interval = enclosure(std::sin(th));
      }
      return {mul(r, var(symbol(std::move(cos_info)))), mul(r, var(symbol(std::move(sin_info))))};
    }
    case Kind::Conj: {
      auto [re, im] = complex(*a[0]);
      return {re, sub({}, im)};
    }
    case Kind::CAdd: {
      auto [r1, i1] = complex(*a[0]);
      auto [r2, i2] = complex(*a[1]);
      return {add(r1, r2), add(i1, i2)};
    }
    case Kind::CMul: {
      auto [r1, i1] = complex(*a[0]);
      auto [r2, i2] = complex(*a[1]);
      return {sub(mul(r1, r2), mul(i1, i2)), add(mul(r1, i2), mul(i1, r2))};
    }
    default:
      if (category_of(u) == Category::Real) return {real(u), {}};
      throw NotArithmetical("not an arithmetical complex term: " + show(u));
  }
}

}  // namespace eqpl::detail
