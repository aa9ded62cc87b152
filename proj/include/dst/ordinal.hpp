#pragma once

// Ordinal arithmetic below omega^omega.
//
// Every ordinal alpha < omega^omega has a unique Cantor normal form
//
//     alpha = w^{e_1}*c_1 + ... + w^{e_r}*c_r
//
// with natural exponents e_1 > ... > e_r and positive natural coefficients.
// Ordinal stores that term list and implements the non-commutative ordinal
// sum, the parity decomposition alpha = lambda + 2n + i, and the canonical
// enumeration of limit ordinals that the tree modules build on.

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dst/error.hpp"

namespace dst {

class Ordinal {
 public:
  struct Term {
    std::uint32_t exp = 0;
    std::uint64_t coeff = 0;
    friend bool operator==(const Term&, const Term&) = default;
  };

  Ordinal() = default;

  // Finite ordinals convert implicitly; this keeps call sites like
  // rank + 1 and Ordinal(3) readable.
  Ordinal(std::uint64_t n) {
    if (n > 0) terms_.push_back({0, n});
  }
  Ordinal(int n) {
    if (n < 0) throw PreconditionError("ordinal literals must be nonnegative");
    if (n > 0) terms_.push_back({0, static_cast<std::uint64_t>(n)});
  }

  static Ordinal omega() { return omegaPower(1); }

  static Ordinal omegaPower(std::uint32_t e, std::uint64_t coeff = 1) {
    Ordinal a;
    if (coeff > 0) a.terms_.push_back({e, coeff});
    return a;
  }

  // Terms must be in strictly decreasing exponent order with positive
  // coefficients; that invariant is checked, not repaired.
  static Ordinal fromTerms(std::vector<Term> terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].coeff == 0)
        throw PreconditionError("CNF coefficient must be positive");
      if (i > 0 && terms[i - 1].exp <= terms[i].exp)
        throw PreconditionError("CNF exponents must be strictly decreasing");
    }
    Ordinal a;
    a.terms_ = std::move(terms);
    return a;
  }

  const std::vector<Term>& terms() const { return terms_; }

  bool isZero() const { return terms_.empty(); }
  bool isFinite() const { return terms_.empty() || terms_[0].exp == 0; }
  bool isSuccessor() const {
    return !terms_.empty() && terms_.back().exp == 0;
  }
  bool isLimit() const { return !terms_.empty() && terms_.back().exp > 0; }

  std::uint64_t natValue() const {
    if (!isFinite()) throw PreconditionError("natValue of an infinite ordinal");
    return terms_.empty() ? 0 : terms_[0].coeff;
  }

  friend bool operator==(const Ordinal&, const Ordinal&) = default;

  // CNF comparison is lexicographic on the term list.
  friend bool operator<(const Ordinal& a, const Ordinal& b) {
    const auto& x = a.terms_;
    const auto& y = b.terms_;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
      if (x[i].exp != y[i].exp) return x[i].exp < y[i].exp;
      if (x[i].coeff != y[i].coeff) return x[i].coeff < y[i].coeff;
    }
    return x.size() < y.size();
  }
  friend bool operator>(const Ordinal& a, const Ordinal& b) { return b < a; }
  friend bool operator<=(const Ordinal& a, const Ordinal& b) { return !(b < a); }
  friend bool operator>=(const Ordinal& a, const Ordinal& b) { return !(a < b); }

  // Ordinal sum in CNF. Terms of *this below the leading exponent of rhs are
  // absorbed: 2 + w = w, and (w*2+3) + w = w*3.
  friend Ordinal operator+(const Ordinal& a, const Ordinal& b) {
    if (b.isZero()) return a;
    if (a.isZero()) return b;
    const std::uint32_t lead = b.terms_[0].exp;
    Ordinal out;
    for (const Term& t : a.terms_) {
      if (t.exp > lead) {
        out.terms_.push_back(t);
      } else {
        break;
      }
    }
    std::size_t bi = 0;
    // Merge coefficients when a still has a term with the leading exponent.
    for (const Term& t : a.terms_) {
      if (t.exp == lead) {
        out.terms_.push_back({lead, t.coeff + b.terms_[0].coeff});
        bi = 1;
        break;
      }
    }
    if (bi == 0) {
      out.terms_.push_back(b.terms_[0]);
      bi = 1;
    }
    for (; bi < b.terms_.size(); ++bi) out.terms_.push_back(b.terms_[bi]);
    return out;
  }

  Ordinal successor() const { return *this + Ordinal(1); }

  Ordinal predecessor() const {
    if (!isSuccessor())
      throw PreconditionError("predecessor of a non-successor ordinal");
    Ordinal out = *this;
    if (out.terms_.back().coeff == 1) {
      out.terms_.pop_back();
    } else {
      out.terms_.back().coeff -= 1;
    }
    return out;
  }

  // The limit-or-zero part lambda of alpha = lambda + m.
  Ordinal limitPart() const {
    Ordinal out = *this;
    if (!out.terms_.empty() && out.terms_.back().exp == 0) out.terms_.pop_back();
    return out;
  }

  std::uint64_t finitePart() const {
    if (terms_.empty() || terms_.back().exp != 0) return 0;
    return terms_.back().coeff;
  }

  // alpha = lambda + 2n + i with lambda limit-or-zero and i in {0,1}.
  struct Decomposition;
  Decomposition decompose() const;

  bool isEven() const { return finitePart() % 2 == 0; }
  bool isOdd() const { return finitePart() % 2 == 1; }

  // alpha' = lambda + n. Note (alpha+1)' = alpha' for even alpha.
  Ordinal alphaPrime() const {
    return limitPart() + Ordinal(finitePart() / 2);
  }

  // Unique x with a + x = b, defined whenever a <= b. Uniqueness is the usual
  // left cancellation law for ordinal sums.
  static Ordinal leftSubtract(const Ordinal& a, const Ordinal& b) {
    if (b < a)
      throw PreconditionError("leftSubtract requires a <= b");
    const auto& x = a.terms_;
    const auto& y = b.terms_;
    std::size_t i = 0;
    while (i < x.size() && i < y.size() && x[i] == y[i]) ++i;
    if (i == x.size()) {
      Ordinal out;
      out.terms_.assign(y.begin() + static_cast<std::ptrdiff_t>(i), y.end());
      return out;
    }
    // Divergent position: either exponents differ (a's tail is absorbed by
    // b's term) or the shared exponent carries a larger coefficient in b.
    Ordinal out;
    if (x[i].exp == y[i].exp) {
      assert(x[i].coeff < y[i].coeff);
      out.terms_.push_back({y[i].exp, y[i].coeff - x[i].coeff});
      ++i;
    }
    for (std::size_t j = i; j < y.size(); ++j) out.terms_.push_back(y[j]);
    return out;
  }

  // omega * gamma, i.e. the gamma-th multiple of omega. Left multiplication
  // by omega shifts every CNF exponent up by one.
  static Ordinal omegaTimes(const Ordinal& gamma) {
    Ordinal out;
    for (const Term& t : gamma.terms_) out.terms_.push_back({t.exp + 1, t.coeff});
    return out;
  }

  // For limit lambda, the unique gamma with lambda = omega * gamma
  // (shift every exponent down by one).
  Ordinal divOmega() const {
    if (!isZero() && !isLimit())
      throw PreconditionError("divOmega of a successor ordinal");
    Ordinal out;
    for (const Term& t : terms_) out.terms_.push_back({t.exp - 1, t.coeff});
    return out;
  }

 private:
  std::vector<Term> terms_;
};

struct Ordinal::Decomposition {
  Ordinal lambda;
  std::uint64_t n = 0;
  int i = 0;
};

inline Ordinal::Decomposition Ordinal::decompose() const {
  Decomposition d;
  d.lambda = limitPart();
  const std::uint64_t m = finitePart();
  d.n = m / 2;
  d.i = static_cast<int>(m % 2);
  return d;
}

inline Ordinal maxOrdinal(const Ordinal& a, const Ordinal& b) {
  return a < b ? b : a;
}

// ---------------------------------------------------------------------------
// Text format: "w^2*3 + w*1 + 4". The printer always emits this shape; the
// parser additionally accepts bare "w", "w^e" and "w^1*c" spellings.

inline std::string toString(const Ordinal& a) {
  if (a.isZero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const auto& t = a.terms()[i];
    if (i > 0) out += " + ";
    if (t.exp == 0) {
      out += std::to_string(t.coeff);
    } else if (t.exp == 1) {
      out += "w*" + std::to_string(t.coeff);
    } else {
      out += "w^" + std::to_string(t.exp) + "*" + std::to_string(t.coeff);
    }
  }
  return out;
}

namespace detail {

inline std::uint64_t parseNat(const std::string& s, std::size_t& pos) {
  if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
    throw ParseError("expected a number in ordinal literal: " + s);
  std::uint64_t v = 0;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    v = v * 10 + static_cast<std::uint64_t>(s[pos] - '0');
    ++pos;
  }
  return v;
}

inline void skipSpace(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

}  // namespace detail

inline Ordinal parseOrdinal(const std::string& text) {
  std::size_t pos = 0;
  std::vector<Ordinal::Term> terms;
  detail::skipSpace(text, pos);
  if (pos == text.size()) throw ParseError("empty ordinal literal");
  while (true) {
    detail::skipSpace(text, pos);
    std::uint32_t exp = 0;
    std::uint64_t coeff = 0;
    if (pos < text.size() && text[pos] == 'w') {
      ++pos;
      exp = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        std::uint64_t e = detail::parseNat(text, pos);
        if (e > 64) throw ParseError("ordinal exponent out of range");
        exp = static_cast<std::uint32_t>(e);
      }
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        coeff = detail::parseNat(text, pos);
      } else {
        coeff = 1;
      }
    } else {
      coeff = detail::parseNat(text, pos);
    }
    if (coeff > 0) terms.push_back({exp, coeff});
    detail::skipSpace(text, pos);
    if (pos == text.size()) break;
    if (text[pos] != '+')
      throw ParseError("unexpected character in ordinal literal: " + text);
    ++pos;
  }
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i - 1].exp <= terms[i].exp)
      throw ParseError("ordinal literal is not in Cantor normal form: " + text);
  return Ordinal::fromTerms(std::move(terms));
}

// ---------------------------------------------------------------------------
// Canonical enumeration of a limit ordinal.
//
// Every beta < lambda is uniquely mu + k with mu a limit-or-zero "stratum
// base" and k finite. The strata below lambda are omega*gamma for
// gamma < lambda/omega, so enumerating [0, lambda) reduces to enumerating
// stratum/offset pairs:
//
//   - finitely many strata (lambda = omega*S): round robin,
//     j |-> omega*(j mod S) + (j div S), which yields the documented prefix
//     0, w, 1, w+1, 2, w+2 for lambda = w*2 and the identity for lambda = w;
//   - infinitely many strata: Cantor-unpair j into (u, v) and map the u-th
//     ordinal below lambda/omega to a stratum base, with offset v.

namespace detail {

inline std::uint64_t isqrt64(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::uint64_t cantorPair(std::uint64_t u, std::uint64_t v) {
  const std::uint64_t s = u + v;
  return s * (s + 1) / 2 + v;
}

inline std::pair<std::uint64_t, std::uint64_t> cantorUnpair(std::uint64_t j) {
  const std::uint64_t w = (isqrt64(8 * j + 1) - 1) / 2;
  const std::uint64_t t = w * (w + 1) / 2;
  const std::uint64_t v = j - t;
  return {w - v, v};
}

}  // namespace detail

Ordinal limitEnumeration(const Ordinal& lambda, std::uint64_t n);

namespace detail {

// Enumerates [0, delta) for infinite delta (delta may be a successor):
// write delta = mu + m with mu limit; the first m indices name the tail
// mu, mu+1, ..., and the rest defer to the limit enumeration of mu.
inline Ordinal sigmaEnum(const Ordinal& delta, std::uint64_t u) {
  const Ordinal mu = delta.limitPart();
  const std::uint64_t m = delta.finitePart();
  if (u < m) return mu + Ordinal(u);
  return limitEnumeration(mu, u - m);
}

inline std::uint64_t sigmaIndex(const Ordinal& delta, const Ordinal& gamma);

}  // namespace detail

inline Ordinal limitEnumeration(const Ordinal& lambda, std::uint64_t n) {
  if (!lambda.isLimit())
    throw PreconditionError("limitEnumeration requires a limit ordinal");
  const Ordinal lp = lambda.divOmega();
  if (lp.isFinite()) {
    const std::uint64_t s = lp.natValue();
    return Ordinal::omegaTimes(Ordinal(n % s)) + Ordinal(n / s);
  }
  const auto [u, v] = detail::cantorUnpair(n);
  return Ordinal::omegaTimes(detail::sigmaEnum(lp, u)) + Ordinal(v);
}

std::uint64_t limitEnumerationIndex(const Ordinal& lambda, const Ordinal& beta);

namespace detail {

inline std::uint64_t sigmaIndex(const Ordinal& delta, const Ordinal& gamma) {
  const Ordinal mu = delta.limitPart();
  const std::uint64_t m = delta.finitePart();
  if (gamma >= mu) {
    const Ordinal off = Ordinal::leftSubtract(mu, gamma);
    if (!off.isFinite() || off.natValue() >= m)
      throw PreconditionError("sigmaIndex: ordinal out of range");
    return off.natValue();
  }
  return m + limitEnumerationIndex(mu, gamma);
}

}  // namespace detail

// Inverse of limitEnumeration.
inline std::uint64_t limitEnumerationIndex(const Ordinal& lambda,
                                           const Ordinal& beta) {
  if (!lambda.isLimit())
    throw PreconditionError("limitEnumerationIndex requires a limit ordinal");
  if (!(beta < lambda))
    throw PreconditionError("limitEnumerationIndex: beta must be below lambda");
  const Ordinal lp = lambda.divOmega();
  const Ordinal mu = beta.limitPart();
  const std::uint64_t k = beta.finitePart();
  const Ordinal gamma = mu.isZero() ? Ordinal() : mu.divOmega();
  if (lp.isFinite()) {
    const std::uint64_t s = lp.natValue();
    return k * s + gamma.natValue();
  }
  return detail::cantorPair(detail::sigmaIndex(lp, gamma), k);
}

// A second documented bijection onto [0, lambda): strata are rotated by one
// in the finite case and the pairing arguments are swapped otherwise. Rank
// computations must not depend on which of the two is used.
inline Ordinal limitEnumerationAlt(const Ordinal& lambda, std::uint64_t n) {
  if (!lambda.isLimit())
    throw PreconditionError("limitEnumerationAlt requires a limit ordinal");
  const Ordinal lp = lambda.divOmega();
  if (lp.isFinite()) {
    const std::uint64_t s = lp.natValue();
    return Ordinal::omegaTimes(Ordinal((n + 1) % s)) + Ordinal(n / s);
  }
  const auto [u, v] = detail::cantorUnpair(n);
  return Ordinal::omegaTimes(detail::sigmaEnum(lp, v)) + Ordinal(u);
}

inline std::uint64_t limitEnumerationAltIndex(const Ordinal& lambda,
                                              const Ordinal& beta) {
  if (!lambda.isLimit())
    throw PreconditionError("limitEnumerationAltIndex requires a limit ordinal");
  if (!(beta < lambda))
    throw PreconditionError(
        "limitEnumerationAltIndex: beta must be below lambda");
  const Ordinal lp = lambda.divOmega();
  const Ordinal mu = beta.limitPart();
  const std::uint64_t k = beta.finitePart();
  const Ordinal gamma = mu.isZero() ? Ordinal() : mu.divOmega();
  if (lp.isFinite()) {
    const std::uint64_t s = lp.natValue();
    const std::uint64_t g = gamma.natValue();
    return k * s + (g + s - 1) % s;
  }
  return detail::cantorPair(k, detail::sigmaIndex(lp, gamma));
}

}  // namespace dst
