#include "matchlab/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "matchlab/errors.hpp"

namespace matchlab {

std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace {

BigInt parse_big_int(const std::string& s) {
  if (s.empty()) throw InputError("empty number");
  std::size_t start = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (start == s.size()) throw InputError("invalid number: '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw InputError("invalid number: '" + s + "'");
  return BigInt(s);
}

BigInt pow10(long exp) {
  BigInt p = 1;
  for (long i = 0; i < exp; ++i) p *= 10;
  return p;
}

}  // namespace

Rational rational_from_string(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw InputError("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt num = parse_big_int(s.substr(0, slash));
    BigInt den = parse_big_int(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + raw + "'");
    return Rational(num, den);
  }

  // Decimal / scientific literal, parsed exactly: d.ddd e +/-k.
  long exp10 = 0;
  std::string mantissa = s;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    std::string exp_str = s.substr(e + 1);
    if (exp_str.empty()) throw InputError("invalid number: '" + raw + "'");
    char* end = nullptr;
    exp10 = std::strtol(exp_str.c_str(), &end, 10);
    if (end == nullptr || *end != '\0') throw InputError("invalid number: '" + raw + "'");
  }
  std::string digits = mantissa;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    exp10 -= static_cast<long>(mantissa.size() - dot - 1);
  }
  if (digits.empty() || digits == "+" || digits == "-")
    throw InputError("invalid number: '" + raw + "'");
  BigInt num = parse_big_int(digits);
  if (exp10 >= 0) return Rational(num * pow10(exp10), 1);
  return Rational(num, pow10(-exp10));
}

}  // namespace matchlab
