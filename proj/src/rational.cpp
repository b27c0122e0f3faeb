#include "gck/rational.hpp"

#include <cctype>

#include "gck/error.hpp"

namespace gck {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  if (s.empty()) throw ParseError("empty rational");
  auto slash = s.find('/');
  auto check_digits = [&](std::string_view part, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !part.empty() && part[0] == '-') i = 1;
    if (i == part.size()) throw ParseError("malformed rational '" + std::string(text) + "'");
    for (; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i])))
        throw ParseError("malformed rational '" + std::string(text) + "'");
  };
  if (slash == std::string::npos) {
    check_digits(s, true);
  } else {
    check_digits(std::string_view(s).substr(0, slash), true);
    check_digits(std::string_view(s).substr(slash + 1), false);
  }
  Rational q(s, 10);
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

}  // namespace gck
