#include "ccauction/json_io.hpp"

namespace ccauction {

using nlohmann::json;

void to_json(json& j, const Seed& s) { j = json{{"root", s.root}, {"stream", s.stream}}; }

void from_json(const json& j, Seed& s) {
  j.at("root").get_to(s.root);
  j.at("stream").get_to(s.stream);
}

void to_json(json& j, const InterimRates& r) {
  j = json{{"a", r.a}, {"b", r.b}, {"q", r.q}, {"p_high", r.p_high}, {"p_low", r.p_low}};
}

void from_json(const json& j, InterimRates& r) {
  j.at("a").get_to(r.a);
  j.at("b").get_to(r.b);
  j.at("q").get_to(r.q);
  j.at("p_high").get_to(r.p_high);
  j.at("p_low").get_to(r.p_low);
}

void to_json(json& j, const FixedPointSolution& s) {
  j = json{{"rates", s.rates},       {"iterations", s.iterations},
           {"residual", s.residual}, {"q_stderr", s.q_stderr},
           {"residual_trace", s.residual_trace}, {"seed", s.seed},
           {"a0", s.a0},             {"b0", s.b0},
           {"converged", s.converged}};
}

void from_json(const json& j, FixedPointSolution& s) {
  j.at("rates").get_to(s.rates);
  j.at("iterations").get_to(s.iterations);
  j.at("residual").get_to(s.residual);
  j.at("q_stderr").get_to(s.q_stderr);
  j.at("residual_trace").get_to(s.residual_trace);
  j.at("seed").get_to(s.seed);
  j.at("a0").get_to(s.a0);
  j.at("b0").get_to(s.b0);
  j.at("converged").get_to(s.converged);
}

void to_json(json& j, const RevenueEstimate& e) {
  j = json{{"mean", e.mean},
           {"stderr", e.std_error},
           {"samples", e.samples},
           {"estimator", e.estimator == Estimator::PlainMean ? "plain_mean" : "median_of_means"},
           {"seed", e.seed}};
}

namespace cf {
void to_json(json& j, const BoundReport& r) {
  j = json{{"checks", json::array()},
           {"b_ratio_other_bidders", r.b_ratio_other_bidders},
           {"b_ratio_all_bidders", r.b_ratio_all_bidders},
           {"b_all_bidders", r.b_all_bidders},
           {"pass", r.all_pass()}};
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
}
}  // namespace cf

void to_json(json& j, const FeasibilityReport& r) {
  j = json{{"target_a", r.target_a},     {"target_b", r.target_b}, {"realized_a", r.realized_a},
           {"realized_b", r.realized_b}, {"stderr_a", r.stderr_a}, {"stderr_b", r.stderr_b},
           {"z_a", r.z_a},               {"z_b", r.z_b},           {"profiles", r.profiles},
           {"supply_violations", r.supply_violations}, {"pass", r.pass}};
}

void to_json(json& j, const ValidationReport& r) {
  j = json{{"checks", json::array()}, {"bounds", r.bounds}, {"feasibility", r.feasibility}, {"pass", r.pass()}};
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"limit", c.limit}});
}

void to_json(json& j, const MenuBicReport& r) {
  j = json{{"types", r.types},
           {"enumerated", r.enumerated},
           {"enumeration_mismatches", r.enumeration_mismatches},
           {"cross_type_violations", r.cross_type_violations},
           {"participation_violations", r.participation_violations},
           {"worst_shortfall", r.worst_shortfall},
           {"tolerance", r.tolerance},
           {"pass", r.pass()}};
}

void to_json(json& j, const DeviationWitness& w) {
  j = json{{"true_type", w.true_type},
           {"misreport", w.misreport},
           {"truthful_utility", w.truthful_utility},
           {"deviating_utility", w.deviating_utility},
           {"gain", w.gain}};
}

void to_json(json& j, const KfBicReport& r) {
  j = json{{"types", r.types},
           {"misreports", r.misreports},
           {"max_same_favorite_gain", r.max_same_favorite_gain},
           {"max_gain_stderr", r.max_gain_stderr},
           {"favorite_switching", r.favorite_switching},
           {"pass", r.pass()}};
}

void to_json(json& j, const SweepRow& r) {
  j = json{{"n", r.n},          {"m", r.m},           {"lambda", r.lambda},     {"T", r.T},
           {"c_star", r.c_star}, {"rev_nsn", r.rev_nsn}, {"srev_n", r.srev_n}, {"residual", r.residual},
           {"gain", r.gain},    {"analytic_lb", r.analytic_lb}};
}

void to_json(json& j, const OlsFit& f) {
  j = json{{"defined", f.defined}, {"points", f.points}};
  if (f.defined) {
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r2"] = f.r2;
  }
}

void to_json(json& j, const GrandBundleRow& r) {
  j = json{{"n", r.n},
           {"m", r.m},
           {"revenue", r.revenue},
           {"proxy", r.proxy},
           {"second_favorite", r.second_fav},
           {"lower", r.lower},
           {"upper", r.upper},
           {"second_favorite_in_bounds", r.second_fav_in_bounds}};
}

namespace cf {
void to_json(json& j, const KfaForms& f) {
  j = json{{"n", f.n},
           {"m", f.m},
           {"log_H", f.log_H},
           {"L", f.L},
           {"log_p", {f.log_p_lo, f.log_p_hi}},
           {"log_p_exact", f.log_p_exact},
           {"log_p_exact_m_exponent", f.log_p_exact_m_exponent},
           {"log_sold_high", {f.log_sold_high_lo, f.log_sold_high_hi}},
           {"high_revenue", {f.high_revenue_lo, f.high_revenue_hi}},
           {"q", {f.q_lo, f.q_hi}},
           {"q_exact", f.q_exact},
           {"low_revenue_lb", f.low_revenue_lb},
           {"low_revenue_exact", f.low_revenue_exact}};
}
}  // namespace cf

void to_json(json& j, const KfaStudy& s) {
  j = json{{"n", s.n},
           {"m", s.m},
           {"forms", s.forms},
           {"high_revenue", s.high_revenue},
           {"low_revenue", s.low_revenue},
           {"total", s.total},
           {"excess", s.excess},
           {"excess_lower_bound", s.excess_lower_bound},
           {"ratio", s.ratio}};
}

}  // namespace ccauction
