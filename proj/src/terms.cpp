#include "tradecredit/terms.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "tradecredit/errors.hpp"

namespace tradecredit {

namespace {

class TermsParser {
 public:
  explicit TermsParser(std::string_view text) : text_(text) {}

  TradeCreditTerms parse() {
    TradeCreditTerms t;
    t.source_text = std::string(text_);

    skip_space();
    const std::size_t percent_at = pos_;
    const double fraction = percent_as_fraction();
    accept('%');
    skip_space();
    expect('/');
    skip_space();
    const std::size_t discount_days_at = pos_;
    t.discount_days = days();
    skip_space();
    expect(',');
    skip_space();
    keyword("net");
    if (!at_space()) fail("expected whitespace after 'net'");
    skip_space();
    t.net_days = days();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing text");

    if (fraction >= 1.0) throw ParseError(percent_at, "cash discount must be below 100%");
    if (t.discount_days > t.net_days)
      throw ParseError(discount_days_at, "discount period exceeds the net period");
    t.discount_rate = fraction;
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

  bool at_space() const { return pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])); }
  bool at_digit() const { return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])); }

  void skip_space() {
    while (at_space()) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void keyword(std::string_view word) {
    for (char c : word) {
      if (pos_ >= text_.size() || std::tolower(static_cast<unsigned char>(text_[pos_])) != c)
        fail("expected '" + std::string(word) + "'");
      ++pos_;
    }
  }

  std::size_t digits() {
    const std::size_t start = pos_;
    while (at_digit()) ++pos_;
    if (pos_ == start) fail("expected a digit");
    return start;
  }

  // Reads a decimal percentage and returns it as a fraction, rounded once
  // from the exact decimal value so that format_terms can round-trip.
  double percent_as_fraction() {
    const std::size_t int_start = digits();
    std::string mantissa(text_.substr(int_start, pos_ - int_start));
    int exponent = -2;
    if (accept('.')) {
      const std::size_t frac_start = digits();
      mantissa += text_.substr(frac_start, pos_ - frac_start);
      exponent -= static_cast<int>(pos_ - frac_start);
    }
    const std::string scientific = mantissa + "e" + std::to_string(exponent);
    double value = 0;
    std::from_chars(scientific.data(), scientific.data() + scientific.size(), value);
    return value;
  }

  int days() {
    const std::size_t start = digits();
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc()) throw ParseError(start, "day count out of range");
    return value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

TradeCreditTerms parse_terms(std::string_view text) { return TermsParser(text).parse(); }

std::string format_terms(const TradeCreditTerms& terms) {
  // shortest round-trip decimal of the fraction, decimal point moved two
  // places right
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, terms.discount_rate, std::chars_format::fixed);
  if (ec != std::errc()) throw ValidationError("terms", "cash discount cannot be formatted");
  std::string text(buffer, end);
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    text += ".";
    dot = text.size() - 1;
  }
  text.erase(dot, 1);
  while (text.size() < dot + 2) text += '0';
  text.insert(dot + 2, ".");
  while (text.size() > 1 && text.front() == '0' && text[1] != '.') text.erase(0, 1);
  while (text.back() == '0') text.pop_back();
  if (text.back() == '.') text.pop_back();
  return text + "/" + std::to_string(terms.discount_days) + ", net " + std::to_string(terms.net_days);
}

}  // namespace tradecredit
