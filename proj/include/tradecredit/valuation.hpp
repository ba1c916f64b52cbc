#pragma once

// Value and cash-flow arithmetic for trade-credit policy changes: receivables
// growth, EBIT change, free cash flow, NOPAT, EVA and discounting.
//
// Every function is a pure template over the scalar type. Typedefs with a
// `d` suffix fix the scalar to double, following the Eigen convention.

#include <cmath>
#include <initializer_list>
#include <utility>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tradecredit/errors.hpp"

namespace tradecredit {

/// Length of the commercial year used by every receivables formula.
inline constexpr int kDaysPerYear = 360;

namespace detail {

template <typename Scalar>
void require_finite(Scalar x, const char* name) {
  using std::isfinite;
  if (!isfinite(x)) throw ValidationError(name, "must be finite");
}

template <typename Scalar>
void require_unit_interval(Scalar x, const char* name) {
  require_finite(x, name);
  if (x < Scalar(0) || x > Scalar(1)) throw ValidationError(name, "must lie in [0, 1]");
}

template <typename Scalar>
void require_non_negative(Scalar x, const char* name) {
  require_finite(x, name);
  if (x < Scalar(0)) throw ValidationError(name, "must be non-negative");
}

}  // namespace detail

/// Sales mix by payment day. Row i says "share(i) of sales is collected on
/// day(i)"; prepayers sit at day 0, discount takers at the discount period.
template <typename Scalar>
struct PaymentMix {
  using Column = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Column shares;
  Column days;

  PaymentMix() = default;
  PaymentMix(std::initializer_list<std::pair<Scalar, Scalar>> rows)
      : shares(static_cast<Eigen::Index>(rows.size())), days(static_cast<Eigen::Index>(rows.size())) {
    Eigen::Index i = 0;
    for (const auto& [share, day] : rows) {
      shares(i) = share;
      days(i) = day;
      ++i;
    }
  }

  Eigen::Index size() const { return shares.size(); }
  Scalar total_share() const { return shares.sum(); }

  /// Sum of shares paying on exactly `day`.
  Scalar share_on_day(Scalar day) const { return (days == day).select(shares, Scalar(0)).sum(); }
};
using PaymentMixd = PaymentMix<double>;

template <typename Scalar>
void validate(const PaymentMix<Scalar>& mix) {
  if (mix.shares.size() != mix.days.size()) throw ValidationError("mix", "shares and days differ in length");
  for (Eigen::Index i = 0; i < mix.size(); ++i) {
    detail::require_unit_interval(mix.shares(i), "mix.share");
    detail::require_non_negative(mix.days(i), "mix.day");
  }
}

/// True when the shares of `mix` sum to one within `tolerance`.
/// A mismatch is reported as a warning upstream, never rejected.
template <typename Scalar>
bool mix_is_complete(const PaymentMix<Scalar>& mix, Scalar tolerance = Scalar(1e-9)) {
  using std::abs;
  return abs(mix.total_share() - Scalar(1)) <= tolerance;
}

/// Average collection period (ACP / DSO) in days: sum of share x day,
/// without renormalising the shares.
template <typename Scalar>
Scalar weighted_collection_period(const PaymentMix<Scalar>& mix) {
  validate(mix);
  Scalar acp(0);
  for (Eigen::Index i = 0; i < mix.size(); ++i) acp += mix.shares(i) * mix.days(i);
  return acp;
}

/// Growth of the average receivables balance when the collection period
/// moves from `acp0` to `acp1` and cash revenue from `cr0` to `cr1`.
///
/// Growing sales: the old revenue is carried for the extra days, and only the
/// variable-cost share of the new sales is financed over the new period.
/// Shrinking or flat sales: the new revenue carries the period change and the
/// lost sales release their variable-cost share at the old period.
template <typename Scalar>
Scalar receivables_growth(Scalar acp0, Scalar acp1, Scalar cr0, Scalar cr1, Scalar vc) {
  detail::require_non_negative(acp0, "acp0");
  detail::require_non_negative(acp1, "acp1");
  detail::require_non_negative(cr0, "cr0");
  detail::require_non_negative(cr1, "cr1");
  detail::require_unit_interval(vc, "vc");
  const Scalar year(kDaysPerYear);
  if (cr1 > cr0) return (acp1 - acp0) * cr0 / year + vc * acp1 * (cr1 - cr0) / year;
  return (acp1 - acp0) * cr1 / year + vc * acp0 * (cr1 - cr0) / year;
}

/// Revenue and credit-cost rates of one trade-credit regime, as they enter
/// the EBIT change.
template <typename Scalar>
struct CreditRegime {
  Scalar cash_revenue{0};
  Scalar bad_debt_rate{0};
  Scalar discount_rate{0};
  Scalar discount_taker_share{0};
};
using CreditRegimed = CreditRegime<double>;

/// EBIT change from moving `before` -> `after`: contribution of the extra
/// sales, less the cost of carrying `delta_aar` at `k_aar`, less the growth
/// in bad debts and in cash discounts granted.
template <typename Scalar>
Scalar ebit_change(const CreditRegime<Scalar>& before, const CreditRegime<Scalar>& after, Scalar vc,
                   Scalar k_aar, Scalar delta_aar) {
  detail::require_unit_interval(vc, "vc");
  detail::require_unit_interval(k_aar, "k_aar");
  detail::require_finite(delta_aar, "delta_aar");
  for (const auto* r : {&before, &after}) {
    detail::require_non_negative(r->cash_revenue, "cash_revenue");
    detail::require_unit_interval(r->bad_debt_rate, "bad_debt");
    detail::require_unit_interval(r->discount_rate, "discount");
    detail::require_unit_interval(r->discount_taker_share, "discount_taker_share");
  }
  const Scalar cr0 = before.cash_revenue;
  const Scalar cr1 = after.cash_revenue;
  return (cr1 - cr0) * (Scalar(1) - vc) - k_aar * delta_aar -
         (after.bad_debt_rate * cr1 - before.bad_debt_rate * cr0) -
         (after.discount_rate * cr1 * after.discount_taker_share -
          before.discount_rate * cr0 * before.discount_taker_share);
}

template <typename Scalar>
Scalar nopat(Scalar pre_tax_operating_flow, Scalar tax_rate) {
  detail::require_finite(pre_tax_operating_flow, "pre_tax_flow");
  detail::require_unit_interval(tax_rate, "tax");
  return pre_tax_operating_flow * (Scalar(1) - tax_rate);
}

template <typename Scalar>
struct CashFlowInputs {
  Scalar cash_revenues{0};
  Scalar cash_expenses{0};
  Scalar non_cash_expenses{0};
  Scalar tax_rate{0};
  Scalar capex{0};
  Scalar nwc_growth{0};
};
using CashFlowInputsd = CashFlowInputs<double>;

/// Free cash flow to the firm for one period.
template <typename Scalar>
Scalar fcff(const CashFlowInputs<Scalar>& in) {
  const Scalar operating = nopat(in.cash_revenues - in.cash_expenses - in.non_cash_expenses, in.tax_rate);
  return operating + in.non_cash_expenses - in.capex - in.nwc_growth;
}

template <typename Scalar>
struct WorkingCapitalSnapshot {
  Scalar accounts_receivable{0};
  Scalar inventory{0};
  Scalar cash{0};
  Scalar accounts_payable{0};
  Scalar other_current_assets{0};
  Scalar other_current_liabilities{0};
};
using WorkingCapitalSnapshotd = WorkingCapitalSnapshot<double>;

/// Net working capital: current assets less current liabilities.
template <typename Scalar>
Scalar nwc(const WorkingCapitalSnapshot<Scalar>& s) {
  detail::require_non_negative(s.accounts_receivable, "accounts_receivable");
  detail::require_non_negative(s.inventory, "inventory");
  detail::require_non_negative(s.cash, "cash");
  detail::require_non_negative(s.accounts_payable, "accounts_payable");
  detail::require_non_negative(s.other_current_assets, "other_current_assets");
  detail::require_non_negative(s.other_current_liabilities, "other_current_liabilities");
  return s.accounts_receivable + s.inventory + s.cash + s.other_current_assets - s.accounts_payable -
         s.other_current_liabilities;
}

/// Economic value added: NOPAT less the capital charge on NWC and
/// operating investments.
template <typename Scalar>
Scalar eva(Scalar nopat_value, Scalar k, Scalar nwc_value, Scalar operating_investments) {
  detail::require_finite(nopat_value, "nopat");
  detail::require_finite(k, "k");
  if (k <= Scalar(0)) throw ValidationError("k", "must be positive");
  return nopat_value - k * (nwc_value + operating_investments);
}

namespace detail {

template <typename Scalar>
void require_discount_rate(Scalar k) {
  require_finite(k, "k");
  if (k <= Scalar(-1)) throw ValidationError("k", "must exceed -1");
}

}  // namespace detail

/// Present value of `flows`, where flows[0] falls at t = 1.
template <typename Derived>
typename Derived::Scalar present_value_of_flows(const Eigen::DenseBase<Derived>& flows, typename Derived::Scalar k) {
  using Scalar = typename Derived::Scalar;
  detail::require_discount_rate(k);
  Scalar pv(0);
  Scalar discount(1);
  for (Eigen::Index t = 0; t < flows.size(); ++t) {
    discount /= (Scalar(1) + k);
    pv += flows(t) * discount;
  }
  return pv;
}

template <typename Scalar>
Scalar present_value_of_flows(const std::vector<Scalar>& flows, Scalar k) {
  return present_value_of_flows(
      Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>(flows.data(), static_cast<Eigen::Index>(flows.size())),
      k);
}

/// Present value of 1 per period for `years` periods; `years` at k = 0.
template <typename Scalar>
Scalar annuity_factor(Scalar k, int years) {
  detail::require_discount_rate(k);
  if (years < 0) throw ValidationError("horizon", "must be non-negative");
  if (k == Scalar(0)) return Scalar(years);
  using std::pow;
  return (Scalar(1) - pow(Scalar(1) + k, -years)) / k;
}

/// How long the recurring NOPAT change lasts.
struct Horizon {
  int years = 3;
  bool perpetuity = false;
};

/// Firm value change: the receivables build-up leaves at t = 0, the after-tax
/// EBIT change recurs for the horizon and is discounted at `k`.
template <typename Scalar>
Scalar policy_value_delta(Scalar delta_aar, Scalar delta_ebit, Scalar tax_rate, Scalar k, Horizon horizon) {
  detail::require_finite(delta_aar, "delta_aar");
  const Scalar recurring = nopat(delta_ebit, tax_rate);
  if (horizon.perpetuity) {
    detail::require_finite(k, "k");
    if (k <= Scalar(0)) throw ValidationError("k", "must be positive for a perpetual horizon");
    return -delta_aar + recurring / k;
  }
  if (horizon.years < 1) throw ValidationError("horizon", "must be at least one year");
  return -delta_aar + recurring * annuity_factor(k, horizon.years);
}

template <typename Scalar>
Scalar policy_value_delta(Scalar delta_aar, Scalar delta_ebit, Scalar tax_rate, Scalar k, int years) {
  return policy_value_delta(delta_aar, delta_ebit, tax_rate, k, Horizon{years, false});
}

/// Yearly EVA change: after-tax EBIT change less the capital charge on the
/// extra receivables.
template <typename Scalar>
Scalar eva_change(Scalar delta_ebit, Scalar tax_rate, Scalar k, Scalar delta_aar) {
  return eva(nopat(delta_ebit, tax_rate), k, delta_aar, Scalar(0));
}

template <typename Scalar>
struct FirmParameters {
  Scalar wacc{0.15};
  Scalar receivables_opex_rate{0.2};
  Scalar tax_rate{0.19};
  Horizon horizon{};
};
using FirmParametersd = FirmParameters<double>;

template <typename Scalar>
void validate(const FirmParameters<Scalar>& f) {
  detail::require_unit_interval(f.wacc, "wacc");
  if (f.wacc <= Scalar(0)) throw ValidationError("wacc", "must be positive");
  detail::require_unit_interval(f.receivables_opex_rate, "k_aar");
  detail::require_unit_interval(f.tax_rate, "tax");
  if (!f.horizon.perpetuity && f.horizon.years < 1) throw ValidationError("horizon", "must be at least one year");
}

/// Every delta produced by comparing two credit regimes.
template <typename Scalar>
struct IncrementalReport {
  Scalar acp_before{0};
  Scalar acp_after{0};
  Scalar delta_aar{0};
  Scalar delta_ebit{0};
  Scalar delta_nopat{0};
  Scalar delta_fcff0{0};
  Scalar delta_fcff_recurring{0};
  Scalar delta_v{0};
  Scalar delta_eva{0};
};
using IncrementalReportd = IncrementalReport<double>;

/// Runs the full chain ACP -> dAAR -> dEBIT -> dFCFF -> dV, dEVA.
/// `vc_growth` applies when revenue grows, `vc_shrink` otherwise.
template <typename Scalar>
IncrementalReport<Scalar> incremental_analysis(const PaymentMix<Scalar>& mix_before, const CreditRegime<Scalar>& before,
                                               const PaymentMix<Scalar>& mix_after, const CreditRegime<Scalar>& after,
                                               Scalar vc_growth, Scalar vc_shrink, const FirmParameters<Scalar>& firm) {
  validate(firm);
  IncrementalReport<Scalar> r;
  r.acp_before = weighted_collection_period(mix_before);
  r.acp_after = weighted_collection_period(mix_after);
  const Scalar vc = after.cash_revenue > before.cash_revenue ? vc_growth : vc_shrink;
  r.delta_aar = receivables_growth(r.acp_before, r.acp_after, before.cash_revenue, after.cash_revenue, vc);
  r.delta_ebit = ebit_change(before, after, vc, firm.receivables_opex_rate, r.delta_aar);
  r.delta_nopat = nopat(r.delta_ebit, firm.tax_rate);
  r.delta_fcff0 = -r.delta_aar;
  r.delta_fcff_recurring = r.delta_nopat;
  r.delta_v = policy_value_delta(r.delta_aar, r.delta_ebit, firm.tax_rate, firm.wacc, firm.horizon);
  r.delta_eva = eva_change(r.delta_ebit, firm.tax_rate, firm.wacc, r.delta_aar);
  return r;
}

}  // namespace tradecredit
