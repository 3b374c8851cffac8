// Copyright 2026 The cyclebound Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "cyclebound/numerics.h"

namespace cyclebound {

namespace {

BigInt Pow10(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Parses [-]digits[.digits][e[+-]digits].
Rational ParseDecimal(std::string_view text) {
  std::string s = Trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string mantissa;
  std::string exponent;
  const std::size_t epos = s.find_first_of("eE", pos);
  if (epos == std::string::npos) {
    mantissa = s.substr(pos);
  } else {
    mantissa = s.substr(pos, epos - pos);
    exponent = s.substr(epos + 1);
  }
  std::string int_part = mantissa;
  std::string frac_part;
  const std::size_t dot = mantissa.find('.');
  if (dot != std::string::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) {
    throw std::invalid_argument("malformed number: " + std::string(text));
  }
  if ((!int_part.empty() && !AllDigits(int_part)) ||
      (!frac_part.empty() && !AllDigits(frac_part))) {
    throw std::invalid_argument("malformed number: " + std::string(text));
  }
  const BigInt digits(int_part + frac_part, 10);
  long exp10 = -static_cast<long>(frac_part.size());
  if (!exponent.empty()) {
    std::string e = exponent;
    bool eneg = false;
    if (e[0] == '+' || e[0] == '-') {
      eneg = e[0] == '-';
      e = e.substr(1);
    }
    if (!AllDigits(e) || e.size() > 9) {
      throw std::invalid_argument("malformed exponent: " + std::string(text));
    }
    const long ev = std::strtol(e.c_str(), nullptr, 10);
    exp10 += eneg ? -ev : ev;
  }
  Rational value = exp10 >= 0 ? Rational(BigInt(digits * Pow10(exp10)))
                              : Rational(digits, Pow10(-exp10));
  return negative ? -value : value;
}

}  // namespace

Rational::Rational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) throw std::domain_error("zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(const mpq_class& value) : value_(value) {
  value_.canonicalize();
}

Rational Rational::Parse(std::string_view text) {
  const std::string s = Trim(text);
  const std::size_t slash = s.find('/');
  if (slash == std::string::npos) return ParseDecimal(s);
  const Rational n = ParseDecimal(s.substr(0, slash));
  const Rational d = ParseDecimal(s.substr(slash + 1));
  if (d.is_zero()) throw std::domain_error("zero denominator");
  return n / d;
}

BigInt Rational::Floor() const {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return r;
}

BigInt Rational::Ceil() const {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return r;
}

Rational Rational::Reciprocal() const {
  if (is_zero()) throw std::domain_error("reciprocal of zero");
  return Rational(value_.get_den(), value_.get_num());
}

Rational& Rational::operator+=(const Rational& o) {
  value_ += o.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  value_ -= o.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  value_ *= o.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  value_ /= o.value_;
  return *this;
}

std::string Rational::ToString() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::ToScientific(int digits) const {
  if (digits < 1) digits = 1;
  if (is_zero()) return "0";
  const bool negative = sign() < 0;
  const BigInt n = abs(value_.get_num());
  const BigInt d = value_.get_den();
  // Decimal exponent e with 10^e <= n/d < 10^(e+1).
  long e = static_cast<long>(n.get_str().size()) -
           static_cast<long>(d.get_str().size());
  auto at_least = [&](long k) {  // n/d >= 10^k
    return k >= 0 ? n >= d * Pow10(k) : n * Pow10(-k) >= d;
  };
  while (!at_least(e)) --e;
  while (at_least(e + 1)) ++e;
  const long shift = digits - 1 - e;
  BigInt m = shift >= 0 ? BigInt(n * Pow10(shift) / d)
                        : BigInt(n / (d * Pow10(-shift)));
  std::string ms = m.get_str();
  std::string out = negative ? "-" : "";
  out += ms.substr(0, 1);
  if (ms.size() > 1) out += "." + ms.substr(1);
  out += "e" + std::to_string(e);
  return out;
}

std::size_t BitLength(const BigInt& n) {
  if (n == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

Rational PowerOfTwo(long exponent) {
  BigInt p = 1;
  if (exponent >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), exponent);
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), -exponent);
  return Rational(BigInt(1), p);
}

namespace {

// floor (up=false) or ceil (up=true) of q * 2^shift, q > 0.
BigInt ScaledQuotient(const BigInt& n, const BigInt& d, long shift, bool up) {
  BigInt num = n;
  BigInt den = d;
  if (shift >= 0) {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), shift);
  } else {
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), -shift);
  }
  BigInt r;
  if (up) {
    mpz_cdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  } else {
    mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  }
  return r;
}

Rational RoundPositive(const Rational& q, int bits, bool up) {
  const BigInt n = q.num();
  const BigInt d = q.den();
  const long shift = static_cast<long>(bits) -
                     (static_cast<long>(BitLength(n)) -
                      static_cast<long>(BitLength(d)));
  const BigInt m = ScaledQuotient(n, d, shift, up);
  return Rational(m) * PowerOfTwo(-shift);
}

}  // namespace

Rational RoundDown(const Rational& q, int bits) {
  if (q.is_zero()) return q;
  if (q.sign() < 0) return -RoundPositive(-q, bits, /*up=*/true);
  return RoundPositive(q, bits, /*up=*/false);
}

Rational RoundUp(const Rational& q, int bits) {
  if (q.is_zero()) return q;
  if (q.sign() < 0) return -RoundPositive(-q, bits, /*up=*/false);
  return RoundPositive(q, bits, /*up=*/true);
}

BigInt ParseInteger(std::string_view text) {
  const std::string s = Trim(text);
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::vector<std::string> factors;
  std::size_t start = 0;
  while (true) {
    const std::size_t star = s.find('*', start);
    factors.push_back(Trim(s.substr(start, star - start)));
    if (star == std::string::npos) break;
    start = star + 1;
  }
  Rational product = 1;
  for (const std::string& f : factors) {
    const std::size_t caret = f.find('^');
    if (caret == std::string::npos) {
      product *= ParseDecimal(f);
      continue;
    }
    const Rational base = ParseDecimal(f.substr(0, caret));
    const std::string e = Trim(f.substr(caret + 1));
    if (!AllDigits(e) || e.size() > 9) {
      throw std::invalid_argument("malformed power: " + f);
    }
    const unsigned long ev = std::strtoul(e.c_str(), nullptr, 10);
    if (!base.is_integer()) throw std::invalid_argument("non-integer base: " + f);
    BigInt p;
    mpz_pow_ui(p.get_mpz_t(), base.num().get_mpz_t(), ev);
    product *= Rational(p);
  }
  if (!product.is_integer()) {
    throw std::invalid_argument("not an integer: " + std::string(text));
  }
  return product.num();
}

std::string_view ToString(TriState t) {
  switch (t) {
    case TriState::kTrue:
      return "TRUE";
    case TriState::kFalse:
      return "FALSE";
    case TriState::kUnknown:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

int DefaultPrecisionFromEnvironment() {
  const char* env = std::getenv("CYCLEBOUND_PRECISION_BITS");
  if (env == nullptr || *env == '\0') return kDefaultPrecisionBits;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 16 || v > (1L << 20)) {
    throw std::invalid_argument(
        "CYCLEBOUND_PRECISION_BITS must be an integer in [16, 2^20]");
  }
  return static_cast<int>(v);
}

}  // namespace cyclebound
