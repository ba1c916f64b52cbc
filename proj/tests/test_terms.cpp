#include "doctest.h"

#include "tradecredit/errors.hpp"
#include "tradecredit/terms.hpp"

using namespace tradecredit;
using doctest::Approx;

TEST_CASE("parses the usual notation") {
  const auto a = parse_terms("2/10, net 30");
  CHECK(a.discount_rate == Approx(0.02));
  CHECK(a.discount_days == 10);
  CHECK(a.net_days == 30);
  CHECK(a.source_text == "2/10, net 30");

  const auto b = parse_terms("3/10, net 40");
  CHECK(b.discount_rate == Approx(0.03));
  CHECK(b.net_days == 40);
}

TEST_CASE("accepts percent signs, decimals, case and spacing variants") {
  CHECK(parse_terms("2%/10, net 30") == parse_terms("2/10, net 30"));
  CHECK(parse_terms("  2 / 10 ,NET   30 ") == parse_terms("2/10, net 30"));
  CHECK(parse_terms("1.5/15, Net 45").discount_rate == Approx(0.015));
  CHECK(parse_terms("0/0, net 30").discount_rate == 0.0);
}

TEST_CASE("rejects malformed text with a position") {
  CHECK_THROWS_AS(parse_terms("net 30 / 2"), ParseError);
  CHECK_THROWS_AS(parse_terms(""), ParseError);
  CHECK_THROWS_AS(parse_terms("2/10 net 30"), ParseError);
  CHECK_THROWS_AS(parse_terms("2/10, net30"), ParseError);
  CHECK_THROWS_AS(parse_terms("2/10, net 30 days"), ParseError);
  CHECK_THROWS_AS(parse_terms("2/-10, net 30"), ParseError);
  try {
    parse_terms("2/10; net 30");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("rejects a discount of 100% or more and a discount period past the net period") {
  CHECK_THROWS_AS(parse_terms("100/10, net 30"), ParseError);
  CHECK_THROWS_AS(parse_terms("2/40, net 30"), ParseError);
  CHECK_NOTHROW(parse_terms("99.9/30, net 30"));
}

TEST_CASE("format and parse round-trip canonical text") {
  for (const char* text : {"2/10, net 30", "3/10, net 45", "0/0, net 30", "1.5/15, net 60", "7/20, net 90",
                           "0.25/5, net 10"}) {
    CHECK(format_terms(parse_terms(text)) == text);
  }
  for (int bp = 0; bp < 9999; bp += 37) {
    TradeCreditTerms t{bp / 10000.0, 10, 30, ""};
    CHECK(parse_terms(format_terms(t)) == t);
  }
}
