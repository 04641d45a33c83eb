#include "ftc/rational.hpp"

namespace ftc {

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::from_decimal(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text), 1);
  const std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  if (frac.size() > 15) throw std::invalid_argument("decimal literal too long: " + text);
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::int64_t w = whole.empty() ? 0 : std::stoll(whole);
  return Rational(w * den + std::stoll(frac.empty() ? "0" : frac), den);
}

} // namespace ftc
