#include "iotprice/cli/serialize.hpp"

#include <fmt/format.h>

namespace iotprice::cli {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

json models_to_json(const std::vector<Model>& models) {
  json out = json::array();
  for (Model m : models)
    out.push_back(std::string(to_string(m)));
  return out;
}

std::vector<Model> models_from_json(const json& j) {
  std::vector<Model> out;
  for (const json& name : j) {
    const auto m = parse_model(name.get<std::string>());
    if (!m)
      throw std::invalid_argument("unknown model name in report");
    out.push_back(*m);
  }
  return out;
}

Entity entity_from_string(const std::string& name) {
  for (Entity e : {Entity::kEndUsers, Entity::kIotsp, Entity::kWsp,
                   Entity::kCsp, Entity::kAdvertisers}) {
    if (to_string(e) == name)
      return e;
  }
  throw std::invalid_argument("unknown entity name in report");
}

json series_to_json(const ModelSeries& s) {
  return {{"demand", s.demand},
          {"u_iotsp", s.u_iotsp},
          {"u_wsp", s.u_wsp},
          {"u_csp", s.u_csp}};
}

ModelSeries series_from_json(const json& j) {
  ModelSeries s;
  j.at("demand").get_to(s.demand);
  j.at("u_iotsp").get_to(s.u_iotsp);
  j.at("u_wsp").get_to(s.u_wsp);
  j.at("u_csp").get_to(s.u_csp);
  return s;
}

}  // namespace

std::string csv_number(double x) {
  return fmt::format("{:.10g}", x);
}

std::string provenance_comment(const std::string& config_hash) {
  return fmt::format("# iotprice {} config={}", "0.1.0", config_hash);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& config_hash) {
  out << provenance_comment(config_hash) << '\n';
  bool first = true;
  for (const char* col : kSweepColumns) {
    out << (first ? "" : ",") << col;
    first = false;
  }
  out << '\n';
  for (const SweepRow& r : rows) {
    const EquilibriumOutcome& e = r.eq;
    auto unit = [](const std::optional<double>& p) {
      return p ? csv_number(*p) : std::string();
    };
    out << to_string(r.model) << ',' << csv_number(r.ba1) << ','
        << to_string(e.regime) << ',' << (e.unique ? "true" : "false") << ','
        << csv_number(e.profile.p_i) << ',' << csv_number(e.profile.eff.w)
        << ',' << csv_number(e.profile.eff.c) << ',' << unit(e.unit.p_w)
        << ',' << unit(e.unit.p_c) << ',' << csv_number(e.payoffs.demand)
        << ',' << csv_number(e.payoffs.u_iotsp) << ','
        << csv_number(e.payoffs.u_wsp) << ',' << csv_number(e.payoffs.u_csp)
        << ',' << csv_number(e.bounds.wsp_worst) << ','
        << csv_number(e.bounds.wsp_best) << ','
        << csv_number(e.bounds.csp_worst) << ','
        << csv_number(e.bounds.csp_best) << '\n';
  }
}

json sweep_to_json(const std::vector<SweepRow>& rows,
                   const std::string& config_hash) {
  json out;
  out["tool"] = "iotprice";
  out["config_hash"] = config_hash;
  json arr = json::array();
  for (const SweepRow& r : rows) {
    const EquilibriumOutcome& e = r.eq;
    arr.push_back({{"model", std::string(to_string(r.model))},
                   {"ba1", r.ba1},
                   {"regime", std::string(to_string(e.regime))},
                   {"unique", e.unique},
                   {"p_i", e.profile.p_i},
                   {"w_eff", e.profile.eff.w},
                   {"c_eff", e.profile.eff.c},
                   {"p_w_unit", optional_number(e.unit.p_w)},
                   {"p_c_unit", optional_number(e.unit.p_c)},
                   {"demand", e.payoffs.demand},
                   {"u_iotsp", e.payoffs.u_iotsp},
                   {"u_wsp", e.payoffs.u_wsp},
                   {"u_csp", e.payoffs.u_csp},
                   {"u_wsp_worst", e.bounds.wsp_worst},
                   {"u_wsp_best", e.bounds.wsp_best},
                   {"u_csp_worst", e.bounds.csp_worst},
                   {"u_csp_best", e.bounds.csp_best}});
  }
  out["rows"] = std::move(arr);
  return out;
}

json to_json(const VerificationReport& r) {
  return {{"passed", r.passed},
          {"max_gain", r.max_gain},
          {"relative_gain", r.relative_gain},
          {"worst_deviator", std::string(to_string(r.worst_deviator))},
          {"worst_deviation", r.worst_deviation},
          {"tolerance", r.tolerance}};
}

json to_json(const PreferenceTable& t) {
  json rows = json::array();
  for (const PreferenceRow& r : t.rows) {
    rows.push_back({{"entity", std::string(to_string(r.entity))},
                    {"low", models_to_json(r.low)},
                    {"high", models_to_json(r.high)},
                    {"high_selected", models_to_json(r.high_selected)},
                    {"condition", r.condition}});
  }
  return {{"low_rev", t.low_rev},
          {"high_rev", t.high_rev},
          {"push_csp_share", t.push_csp_share},
          {"rows", std::move(rows)}};
}

PreferenceTable preference_table_from_json(const json& j) {
  PreferenceTable t;
  j.at("low_rev").get_to(t.low_rev);
  j.at("high_rev").get_to(t.high_rev);
  j.at("push_csp_share").get_to(t.push_csp_share);
  for (const json& r : j.at("rows")) {
    PreferenceRow row;
    row.entity = entity_from_string(r.at("entity").get<std::string>());
    row.low = models_from_json(r.at("low"));
    row.high = models_from_json(r.at("high"));
    row.high_selected = models_from_json(r.at("high_selected"));
    r.at("condition").get_to(row.condition);
    t.rows.push_back(std::move(row));
  }
  return t;
}

json to_json(const ComparisonReport& r) {
  json thresholds = json::array();
  for (const Threshold& t : r.thresholds) {
    thresholds.push_back({{"name", t.name},
                          {"value", t.value},
                          {"bracket_lo", t.bracket_lo},
                          {"bracket_hi", t.bracket_hi},
                          {"confirmed", t.confirmed}});
  }
  json violations = json::array();
  for (const OrderingViolation& v : r.violations)
    violations.push_back(
        {{"ba1", v.ba1}, {"rule", v.rule}, {"detail", v.detail}});
  return {
      {"params",
       {{"d", r.params.d},
        {"d_max", r.params.d_max},
        {"alpha", r.params.alpha},
        {"beta", r.params.beta},
        {"kappa", r.params.a2_model.kappa}}},
      {"push_lambda", r.push_lambda},
      {"ba1", r.ba1_axis},
      {"series",
       {{"push", series_to_json(r.push)},
        {"pull", series_to_json(r.pull)},
        {"hybrid", series_to_json(r.hybrid)},
        {"push_bounds",
         {{"wsp_worst", r.push_bounds.wsp_worst},
          {"wsp_best", r.push_bounds.wsp_best},
          {"csp_worst", r.push_bounds.csp_worst},
          {"csp_best", r.push_bounds.csp_best}}}}},
      {"thresholds", std::move(thresholds)},
      {"table1", to_json(r.table1)},
      {"violations", std::move(violations)}};
}

ComparisonReport comparison_report_from_json(const json& j) {
  ComparisonReport r;
  const json& p = j.at("params");
  p.at("d").get_to(r.params.d);
  p.at("d_max").get_to(r.params.d_max);
  p.at("alpha").get_to(r.params.alpha);
  p.at("beta").get_to(r.params.beta);
  p.at("kappa").get_to(r.params.a2_model.kappa);
  j.at("push_lambda").get_to(r.push_lambda);
  j.at("ba1").get_to(r.ba1_axis);
  const json& s = j.at("series");
  r.push = series_from_json(s.at("push"));
  r.pull = series_from_json(s.at("pull"));
  r.hybrid = series_from_json(s.at("hybrid"));
  const json& b = s.at("push_bounds");
  b.at("wsp_worst").get_to(r.push_bounds.wsp_worst);
  b.at("wsp_best").get_to(r.push_bounds.wsp_best);
  b.at("csp_worst").get_to(r.push_bounds.csp_worst);
  b.at("csp_best").get_to(r.push_bounds.csp_best);
  for (const json& t : j.at("thresholds")) {
    Threshold th;
    t.at("name").get_to(th.name);
    t.at("value").get_to(th.value);
    t.at("bracket_lo").get_to(th.bracket_lo);
    t.at("bracket_hi").get_to(th.bracket_hi);
    t.at("confirmed").get_to(th.confirmed);
    r.thresholds.push_back(std::move(th));
  }
  r.table1 = preference_table_from_json(j.at("table1"));
  for (const json& v : j.at("violations")) {
    OrderingViolation ov;
    v.at("ba1").get_to(ov.ba1);
    v.at("rule").get_to(ov.rule);
    v.at("detail").get_to(ov.detail);
    r.violations.push_back(std::move(ov));
  }
  return r;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& r,
                          const std::string& config_hash) {
  out << provenance_comment(config_hash) << '\n';
  for (const Threshold& t : r.thresholds)
    out << "# threshold " << t.name << '=' << csv_number(t.value) << '\n';
  out << "ba1";
  for (const char* m : {"push", "pull", "hybrid"}) {
    for (const char* q : {"demand", "u_iotsp", "u_wsp", "u_csp"})
      out << ',' << m << '_' << q;
  }
  out << ",push_u_wsp_worst,push_u_wsp_best,push_u_csp_worst,"
         "push_u_csp_best\n";
  for (size_t i = 0; i < r.ba1_axis.size(); ++i) {
    out << csv_number(r.ba1_axis[i]);
    for (const ModelSeries* s : {&r.push, &r.pull, &r.hybrid}) {
      out << ',' << csv_number(s->demand[i]) << ','
          << csv_number(s->u_iotsp[i]) << ',' << csv_number(s->u_wsp[i])
          << ',' << csv_number(s->u_csp[i]);
    }
    out << ',' << csv_number(r.push_bounds.wsp_worst[i]) << ','
        << csv_number(r.push_bounds.wsp_best[i]) << ','
        << csv_number(r.push_bounds.csp_worst[i]) << ','
        << csv_number(r.push_bounds.csp_best[i]) << '\n';
  }
}

json to_json(const BSelection& s) {
  return {{"maximizers", s.maximizers},
          {"achieved_ad_rev", s.achieved_ad_rev},
          {"payoff_at_max", s.payoff_at_max}};
}

}  // namespace iotprice::cli
