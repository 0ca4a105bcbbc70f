#include "dippl/rational.hpp"

#include <cctype>

namespace dippl {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

bool parse_rational(std::string_view text, Rational& out) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return false;
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) return false;
    out = Rational(n, d);
    out.canonicalize();
    return true;
  }

  auto dot = text.find('.');
  auto whole = text.substr(0, dot);
  std::string_view frac;
  if (dot != std::string_view::npos) {
    frac = text.substr(dot + 1);
    if (!all_digits(frac)) return false;
  }
  if (!all_digits(whole)) return false;

  mpz_class scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  mpz_class digits(std::string(whole) + std::string(frac), 10);
  out = Rational(digits, scale);
  out.canonicalize();
  return true;
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::string to_decimal(const Rational& r, int digits) {
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;

  // round half away from zero on |r| * 10^digits
  Rational scaled = abs(r) * scale;
  mpz_class q = scaled.get_num() / scaled.get_den();
  mpz_class rem = scaled.get_num() % scaled.get_den();
  if (2 * rem >= scaled.get_den()) q += 1;

  std::string body = q.get_str();
  if (static_cast<int>(body.size()) <= digits) {
    body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
  }
  std::string out = (sgn(r) < 0 && q != 0) ? "-" : "";
  out += body.substr(0, body.size() - static_cast<std::size_t>(digits));
  if (digits > 0) {
    out += '.';
    out += body.substr(body.size() - static_cast<std::size_t>(digits));
  }
  return out;
}

}  // namespace dippl
