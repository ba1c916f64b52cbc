#pragma once

#include <string>
#include <string_view>

namespace tradecredit {

/// Trade credit terms "ps/os, net ok": a cash discount `discount_rate` for
/// payment within `discount_days`, full amount due after `net_days`.
struct TradeCreditTerms {
  double discount_rate = 0;
  int discount_days = 0;
  int net_days = 0;
  std::string source_text;

  friend bool operator==(const TradeCreditTerms& a, const TradeCreditTerms& b) {
    return a.discount_rate == b.discount_rate && a.discount_days == b.discount_days && a.net_days == b.net_days;
  }
};

/// Parses terms such as "2/10, net 30", "2.5%/15, NET 45" or "0/0, net 30".
///
///   terms    := ws percent ws '/' ws days ws ',' ws 'net' ws1 days ws
///   percent  := number ['%']
///   number   := digits ['.' digits]
///
/// The discount is written in percent. Throws ParseError carrying the
/// offending position for malformed text, a discount of 100% or more, or a
/// discount period longer than the net period.
TradeCreditTerms parse_terms(std::string_view text);

/// Canonical text, e.g. "2/10, net 30". parse_terms(format_terms(t)) == t.
std::string format_terms(const TradeCreditTerms& terms);

}  // namespace tradecredit
