// Copyright 2026 The aihq-rater Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aihq/report.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <json.hpp>
#include <set>

#include "aihq/csv.hpp"
#include "aihq/error.hpp"
#include "aihq/strings.hpp"

namespace aihq {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Slice s) noexcept {
  switch (s) {
    case Slice::All: return "All";
    case Slice::Ambiguous: return "Ambiguous";
    case Slice::Intentional: return "Intentional";
    case Slice::Accidental: return "Accidental";
  }
  return "?";
}

std::optional<ScenarioType> scenario_type_of(Slice s) noexcept {
  switch (s) {
    case Slice::All: return std::nullopt;
    case Slice::Ambiguous: return ScenarioType::Ambiguous;
    case Slice::Intentional: return ScenarioType::Intentional;
    case Slice::Accidental: return ScenarioType::Accidental;
  }
  return std::nullopt;
}

std::string_view to_string(Subscale s) noexcept {
  switch (s) {
    case Subscale::AttributionOfIntent: return "intent";
    case Subscale::AngerResponse: return "anger";
    case Subscale::AttributionOfBlame: return "blame";
  }
  return "?";
}

ScaleTable human_scale_table(const Dataset& dataset, const Catalog& catalog) {
  ScaleTable out;
  for (const auto& p : dataset) {
    std::array<std::map<int, double>, 2> items;
    for (const auto& r : p.responses) {
      if (auto m = r.mean_human_rating()) items[index_of(r.construct)][r.scenario_id] = *m;
    }
    auto& e = out[p.participant_id];
    e.group = p.group;
    for (Construct c : kConstructs) e.by_construct[index_of(c)] = aggregate_scales(items[index_of(c)], catalog);
  }
  return out;
}

ScaleTable rater_scale_table(const Dataset& dataset, const Catalog& catalog, std::size_t rater) {
  if (rater > 1) throw Error(ErrorCode::InvalidArgument, "rater index must be 0 or 1");
  ScaleTable out;
  for (const auto& p : dataset) {
    std::array<std::map<int, int>, 2> items;
    for (const auto& r : p.responses) {
      if (r.human_ratings.size() >= 2) items[index_of(r.construct)][r.scenario_id] = r.human_ratings[rater];
    }
    auto& e = out[p.participant_id];
    e.group = p.group;
    for (Construct c : kConstructs) e.by_construct[index_of(c)] = aggregate_scales(items[index_of(c)], catalog);
  }
  return out;
}

namespace {

AgreementCell correlate(const std::vector<double>& x, const std::vector<double>& y) {
  AgreementCell cell;
  cell.n = x.size();
  if (x.size() < 3) {
    cell.reason = fmt::format("only {} paired participants", x.size());
    return cell;
  }
  try {
    cell.result = stats::pearson(x, y);
  } catch (const Error& e) {
    cell.reason = e.code() == ErrorCode::DegenerateVariance ? "zero variance" : e.what();
  }
  return cell;
}

AgreementGrid agreement_grid(const ScaleTable& a, const ScaleTable& b, std::optional<Group> stratum) {
  AgreementGrid grid;
  for (Slice s : kSlices) {
    for (Construct c : kConstructs) {
      std::vector<double> x;
      std::vector<double> y;
      for (const auto& [pid, ea] : a) {
        if (stratum && ea.group != *stratum) continue;
        auto it = b.find(pid);
        if (it == b.end()) continue;
        const auto va = ea.by_construct[index_of(c)].slice(scenario_type_of(s));
        const auto vb = it->second.by_construct[index_of(c)].slice(scenario_type_of(s));
        if (!va || !vb) continue;
        x.push_back(*va);
        y.push_back(*vb);
      }
      grid[index_of(s)][index_of(c)] = correlate(x, y);
    }
  }
  return grid;
}

}  // namespace

AgreementReport build_agreement_report(const ScaleTable& a, const ScaleTable& b, bool by_stratum) {
  AgreementReport report;
  report.participants_a = a.size();
  report.participants_b = b.size();
  std::set<Group> groups;
  for (const auto& [pid, e] : a) {
    if (b.contains(pid)) {
      ++report.participants_shared;
      groups.insert(e.group);
    }
  }
  if (report.participants_shared == 0) {
    throw Error(ErrorCode::EmptyCell, "the two score tables share no participant");
  }
  report.overall = agreement_grid(a, b, std::nullopt);
  if (by_stratum) {
    for (Group g : {Group::TBI, Group::HC}) {
      if (groups.contains(g)) report.by_stratum[g] = agreement_grid(a, b, g);
    }
  }
  return report;
}

std::array<IccSummary, 2> item_level_icc(const Dataset& dataset) {
  std::array<IccSummary, 2> out;
  for (Construct c : kConstructs) {
    std::vector<std::vector<double>> rows;
    for (const auto& p : dataset) {
      for (const auto& r : p.responses) {
        if (r.construct == c && r.human_ratings.size() >= 2) {
          rows.push_back({static_cast<double>(r.human_ratings[0]), static_cast<double>(r.human_ratings[1])});
        }
      }
    }
    auto& s = out[index_of(c)];
    s.n_items = rows.size();
    if (rows.size() < 2) {
      s.reason = fmt::format("only {} doubly rated items", rows.size());
      continue;
    }
    try {
      s.icc2_1 = stats::icc_two_way(rows, stats::IccForm::ICC2_1);
      s.icc3_1 = stats::icc_two_way(rows, stats::IccForm::ICC3_1);
    } catch (const Error& e) {
      s.reason = e.code() == ErrorCode::DegenerateVariance ? "zero variance" : e.what();
    }
  }
  return out;
}

GroupDifferenceTable build_group_difference_table(const ScaleTable& scales, stats::TTestMethod method,
                                                  stats::Tail tail) {
  GroupDifferenceTable table;
  table.method = method;
  table.tail = tail;
  for (Slice s : kSlices) {
    for (Construct c : kConstructs) {
      std::vector<double> tbi;
      std::vector<double> hc;
      for (const auto& [pid, e] : scales) {
        const auto v = e.by_construct[index_of(c)].slice(scenario_type_of(s));
        if (!v) continue;
        if (e.group == Group::TBI) tbi.push_back(*v);
        if (e.group == Group::HC) hc.push_back(*v);
      }
      auto& cell = table.cells[index_of(s)][index_of(c)];
      cell.n_tbi = tbi.size();
      cell.n_hc = hc.size();
      if (tbi.size() < 2 || hc.size() < 2) {
        cell.reason = fmt::format("need 2 per group, have TBI {} HC {}", tbi.size(), hc.size());
        continue;
      }
      try {
        cell.test = stats::group_ttest(tbi, hc, method, tail);
        cell.stars = std::string(stats::significance_stars(cell.test->p));
      } catch (const Error& e) {
        cell.reason = e.what();
      }
    }
  }
  return table;
}

std::string SubscaleMatrix::stars(Subscale s, Slice sl, Construct c) const {
  const auto& cell = cells[static_cast<std::size_t>(s)][index_of(sl)][index_of(c)];
  return cell.result ? std::string(stats::significance_stars(cell.result->p_two_tailed)) : "";
}

SubscaleMatrix build_subscale_matrix(const Dataset& dataset, const Catalog& catalog, const ScaleTable& scores,
                                     std::optional<Group> group_filter) {
  SubscaleMatrix m;
  m.group_filter = group_filter;
  std::map<std::string, std::array<ScaleScores, 3>> self;
  for (const auto& p : dataset) {
    if (group_filter && p.group != *group_filter) continue;
    if (p.self_reports.empty()) continue;
    std::array<std::map<int, int>, 3> items;
    for (const auto& [sid, r] : p.self_reports) {
      items[0][sid] = r.intentionality;
      items[1][sid] = r.anger;
      items[2][sid] = r.blame;
    }
    auto& e = self[p.participant_id];
    for (std::size_t k = 0; k < 3; ++k) e[k] = aggregate_scales(items[k], catalog);
  }
  if (self.empty()) throw Error(ErrorCode::MissingSelfReports, "no self-report ratings in the dataset");

  for (Subscale sub : kSubscales) {
    const auto k = static_cast<std::size_t>(sub);
    for (Slice s : kSlices) {
      for (Construct c : kConstructs) {
        std::vector<double> x;
        std::vector<double> y;
        for (const auto& [pid, e] : self) {
          auto it = scores.find(pid);
          if (it == scores.end()) continue;
          const auto vs = e[k].slice(scenario_type_of(s));
          const auto vc = it->second.by_construct[index_of(c)].slice(scenario_type_of(s));
          if (!vs || !vc) continue;
          x.push_back(*vs);
          y.push_back(*vc);
        }
        m.cells[k][index_of(s)][index_of(c)] = correlate(x, y);
      }
    }
  }
  return m;
}

EvaluationInput parse_evaluation_csv(std::string_view text) {
  EvaluationInput input;
  input.dataset = parse_dataset_csv(text);
  const csv::Table t = csv::parse(text);
  static constexpr std::array<std::string_view, 2> kModelColumns{"model_hostility", "model_aggression"};
  const auto pid_col = t.column("participant_id");
  const auto sid_col = t.column("scenario_id");
  for (Construct c : kConstructs) {
    const auto col = t.column(kModelColumns[index_of(c)]);
    if (!col) throw Error(ErrorCode::MissingColumn, fmt::format("missing column {}", kModelColumns[index_of(c)]));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto raw = trim(t.rows[r][*col]);
      if (raw.empty()) continue;
      auto v = parse_int(raw);
      if (!v) {
        throw Error(ErrorCode::InvalidCsv, fmt::format("row {}, column {}: rating must be an integer, got '{}'",
                                                       t.row_numbers[r], kModelColumns[index_of(c)], raw));
      }
      if (*v < kMinRating || *v > kMaxRating) {
        throw Error(ErrorCode::RatingOutOfRange, fmt::format("row {}, column {}: rating {} outside 1-5",
                                                             t.row_numbers[r], kModelColumns[index_of(c)], *v));
      }
      const auto sid = parse_int(trim(t.rows[r][*sid_col]));
      input.model_ratings[index_of(c)][std::string(trim(t.rows[r][*pid_col]))][*sid] = *v;
    }
  }
  return input;
}

EvaluationInput load_evaluation_csv(const std::filesystem::path& path) {
  return parse_evaluation_csv(csv::read_text_file(path));
}

ScaleTable model_scale_table(const EvaluationInput& input, const Catalog& catalog) {
  ScaleTable out;
  static const std::map<int, int> kNone;
  for (const auto& p : input.dataset) {
    auto& e = out[p.participant_id];
    e.group = p.group;
    for (Construct c : kConstructs) {
      const auto& by_pid = input.model_ratings[index_of(c)];
      auto it = by_pid.find(p.participant_id);
      e.by_construct[index_of(c)] = aggregate_scales(it == by_pid.end() ? kNone : it->second, catalog);
    }
  }
  return out;
}

EvaluationReport evaluate(const EvaluationInput& input, const Catalog& catalog, const EvaluationOptions& options) {
  EvaluationReport report;
  report.participants = input.dataset.size();
  const ScaleTable human = human_scale_table(input.dataset, catalog);
  const ScaleTable model = model_scale_table(input, catalog);
  report.model_vs_human = build_agreement_report(model, human);

  bool doubly_rated = false;
  bool tbi = false;
  bool hc = false;
  bool self = false;
  for (const auto& p : input.dataset) {
    tbi |= p.group == Group::TBI;
    hc |= p.group == Group::HC;
    self |= !p.self_reports.empty();
    for (const auto& r : p.responses) doubly_rated |= r.human_ratings.size() >= 2;
  }
  if (doubly_rated) {
    report.rater1_vs_rater2 = build_agreement_report(rater_scale_table(input.dataset, catalog, 0),
                                                     rater_scale_table(input.dataset, catalog, 1));
    report.icc = item_level_icc(input.dataset);
  }
  if (tbi && hc) {
    report.human_groups = build_group_difference_table(human, options.method, options.tail);
    report.model_groups = build_group_difference_table(model, options.method, options.tail);
  }
  if (self) {
    report.subscales_human = build_subscale_matrix(input.dataset, catalog, human);
    report.subscales_model = build_subscale_matrix(input.dataset, catalog, model);
  }
  return report;
}

namespace {

ordered_json cell_json(const AgreementCell& c) {
  ordered_json j;
  j["n"] = c.n;
  if (c.result) {
    j["r"] = c.result->r;
    j["df"] = c.result->df;
    j["t"] = c.result->t;
    j["p_two_tailed"] = c.result->p_two_tailed;
    j["stars"] = stats::significance_stars(c.result->p_two_tailed);
  } else {
    j["reason"] = c.reason;
  }
  return j;
}

ordered_json grid_json(const AgreementGrid& g) {
  ordered_json j = ordered_json::object();
  for (Slice s : kSlices) {
    ordered_json row = ordered_json::object();
    for (Construct c : kConstructs) row[std::string(to_string(c))] = cell_json(g[index_of(s)][index_of(c)]);
    j[std::string(to_string(s))] = std::move(row);
  }
  return j;
}

ordered_json agreement_json(const AgreementReport& r) {
  ordered_json j;
  j["participants_a"] = r.participants_a;
  j["participants_b"] = r.participants_b;
  j["participants_shared"] = r.participants_shared;
  j["overall"] = grid_json(r.overall);
  j["by_stratum"] = ordered_json::object();
  for (const auto& [g, grid] : r.by_stratum) j["by_stratum"][std::string(to_string(g))] = grid_json(grid);
  return j;
}

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json icc_json(const std::array<IccSummary, 2>& icc) {
  ordered_json j = ordered_json::object();
  for (Construct c : kConstructs) {
    const auto& s = icc[index_of(c)];
    ordered_json e;
    e["n_items"] = s.n_items;
    e["ICC2_1"] = opt(s.icc2_1);
    e["ICC3_1"] = opt(s.icc3_1);
    if (!s.reason.empty()) e["reason"] = s.reason;
    j[std::string(to_string(c))] = std::move(e);
  }
  return j;
}

ordered_json groups_json(const GroupDifferenceTable& t) {
  ordered_json j;
  j["method"] = stats::to_string(t.method);
  j["tail"] = stats::to_string(t.tail);
  j["rows"] = ordered_json::object();
  for (Slice s : kSlices) {
    ordered_json row = ordered_json::object();
    for (Construct c : kConstructs) {
      const auto& cell = t.cells[index_of(s)][index_of(c)];
      ordered_json e;
      e["n_tbi"] = cell.n_tbi;
      e["n_hc"] = cell.n_hc;
      if (cell.test) {
        e["mean_tbi"] = cell.test->mean_a;
        e["mean_hc"] = cell.test->mean_b;
        e["t"] = cell.test->t;
        e["df"] = cell.test->df;
        e["p"] = cell.test->p;
        e["stars"] = cell.stars;
      } else {
        e["reason"] = cell.reason;
      }
      row[std::string(to_string(c))] = std::move(e);
    }
    j["rows"][std::string(to_string(s))] = std::move(row);
  }
  return j;
}

ordered_json subscales_json(const SubscaleMatrix& m) {
  ordered_json j = ordered_json::object();
  for (Subscale sub : kSubscales) {
    ordered_json rows = ordered_json::object();
    for (Slice s : kSlices) {
      ordered_json row = ordered_json::object();
      for (Construct c : kConstructs) {
        row[std::string(to_string(c))] = cell_json(m.cells[static_cast<std::size_t>(sub)][index_of(s)][index_of(c)]);
      }
      rows[std::string(to_string(s))] = std::move(row);
    }
    j[std::string(to_string(sub))] = std::move(rows);
  }
  return j;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
  ordered_json j;
  j["participants"] = report.participants;
  j["model_vs_human"] = agreement_json(report.model_vs_human);
  j["rater1_vs_rater2"] = report.rater1_vs_rater2 ? agreement_json(*report.rater1_vs_rater2) : ordered_json(nullptr);
  j["icc"] = report.icc ? icc_json(*report.icc) : ordered_json(nullptr);
  j["human_groups"] = report.human_groups ? groups_json(*report.human_groups) : ordered_json(nullptr);
  j["model_groups"] = report.model_groups ? groups_json(*report.model_groups) : ordered_json(nullptr);
  j["subscales_human"] = report.subscales_human ? subscales_json(*report.subscales_human) : ordered_json(nullptr);
  j["subscales_model"] = report.subscales_model ? subscales_json(*report.subscales_model) : ordered_json(nullptr);
  return j.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

struct LongWriter {
  std::string out;

  void row(std::string_view section, std::string_view stratum, std::string_view r, std::string_view c,
           std::string_view metric, const std::string& value) {
    csv::append_row(out, {std::string(section), std::string(stratum), std::string(r), std::string(c),
                          std::string(metric), value});
  }

  void cell(std::string_view section, std::string_view stratum, std::string_view r, std::string_view c,
            const AgreementCell& cell) {
    row(section, stratum, r, c, "n", std::to_string(cell.n));
    if (!cell.result) {
      row(section, stratum, r, c, "reason", cell.reason);
      return;
    }
    row(section, stratum, r, c, "r", num(cell.result->r));
    row(section, stratum, r, c, "t", num(cell.result->t));
    row(section, stratum, r, c, "df", num(cell.result->df));
    row(section, stratum, r, c, "p", num(cell.result->p_two_tailed));
    row(section, stratum, r, c, "stars", std::string(stats::significance_stars(cell.result->p_two_tailed)));
  }

  void grid(std::string_view section, std::string_view stratum, const AgreementGrid& g) {
    for (Slice s : kSlices) {
      for (Construct c : kConstructs) cell(section, stratum, to_string(s), to_string(c), g[index_of(s)][index_of(c)]);
    }
  }

  void agreement(std::string_view section, const AgreementReport& r) {
    grid(section, "All", r.overall);
    for (const auto& [g, grid_] : r.by_stratum) grid(section, to_string(g), grid_);
  }

  void groups(std::string_view section, const GroupDifferenceTable& t) {
    for (Slice s : kSlices) {
      for (Construct c : kConstructs) {
        const auto& cell = t.cells[index_of(s)][index_of(c)];
        const auto rs = to_string(s);
        const auto cs = to_string(c);
        row(section, "All", rs, cs, "n_tbi", std::to_string(cell.n_tbi));
        row(section, "All", rs, cs, "n_hc", std::to_string(cell.n_hc));
        if (!cell.test) {
          row(section, "All", rs, cs, "reason", cell.reason);
          continue;
        }
        row(section, "All", rs, cs, "mean_tbi", num(cell.test->mean_a));
        row(section, "All", rs, cs, "mean_hc", num(cell.test->mean_b));
        row(section, "All", rs, cs, "t", num(cell.test->t));
        row(section, "All", rs, cs, "df", num(cell.test->df));
        row(section, "All", rs, cs, "p", num(cell.test->p));
        row(section, "All", rs, cs, "stars", cell.stars);
      }
    }
  }

  void subscales(std::string_view section, const SubscaleMatrix& m) {
    for (Subscale sub : kSubscales) {
      for (Slice s : kSlices) {
        for (Construct c : kConstructs) {
          cell(section, "All", fmt::format("{}/{}", to_string(sub), to_string(s)), to_string(c),
               m.cells[static_cast<std::size_t>(sub)][index_of(s)][index_of(c)]);
        }
      }
    }
  }
};

}  // namespace

std::string report_to_csv(const EvaluationReport& report) {
  LongWriter w;
  w.row("section", "stratum", "row", "construct", "metric", "value");
  w.row("summary", "All", "", "", "participants", std::to_string(report.participants));
  w.agreement("model_vs_human", report.model_vs_human);
  if (report.rater1_vs_rater2) w.agreement("rater1_vs_rater2", *report.rater1_vs_rater2);
  if (report.icc) {
    for (Construct c : kConstructs) {
      const auto& s = (*report.icc)[index_of(c)];
      w.row("icc", "All", "items", to_string(c), "n", std::to_string(s.n_items));
      if (s.icc2_1) w.row("icc", "All", "items", to_string(c), "ICC2_1", num(*s.icc2_1));
      if (s.icc3_1) w.row("icc", "All", "items", to_string(c), "ICC3_1", num(*s.icc3_1));
      if (!s.reason.empty()) w.row("icc", "All", "items", to_string(c), "reason", s.reason);
    }
  }
  if (report.human_groups) w.groups("human_groups", *report.human_groups);
  if (report.model_groups) w.groups("model_groups", *report.model_groups);
  if (report.subscales_human) w.subscales("subscales_human", *report.subscales_human);
  if (report.subscales_model) w.subscales("subscales_model", *report.subscales_model);
  return w.out;
}

namespace {

std::string cell_text(const AgreementCell& c) {
  if (!c.result) return fmt::format("n/a (n={})", c.n);
  const auto& r = *c.result;
  return fmt::format("{:.3f}{:<3} t({:g})={:.2f}", r.r, stats::significance_stars(r.p_two_tailed), r.df, r.t);
}

void grid_text(std::string& out, const AgreementGrid& g) {
  out += fmt::format("  {:<12} {:<28} {:<28}\n", "Scenarios", "Hostility", "Aggression");
  for (Slice s : kSlices) {
    out += fmt::format("  {:<12} {:<28} {:<28}\n", to_string(s), cell_text(g[index_of(s)][0]),
                       cell_text(g[index_of(s)][1]));
  }
}

void agreement_text(std::string& out, std::string_view title, const AgreementReport& r) {
  out += fmt::format("{} (participants: {})\n", title, r.participants_shared);
  out += "All participants\n";
  grid_text(out, r.overall);
  for (const auto& [g, grid] : r.by_stratum) {
    out += fmt::format("{}\n", to_string(g));
    grid_text(out, grid);
  }
  out += "\n";
}

std::string group_cell_text(const GroupDifferenceCell& c) {
  if (!c.test) return "n/a";
  return fmt::format("{:.2f} vs {:.2f} p={:.3f}{}", c.test->mean_a, c.test->mean_b, c.test->p, c.stars);
}

void groups_text(std::string& out, std::string_view title, const GroupDifferenceTable& t) {
  out += fmt::format("{} (TBI vs HC, {}, {})\n", title, stats::to_string(t.method), stats::to_string(t.tail));
  out += fmt::format("  {:<12} {:<28} {:<28}\n", "Scenarios", "Hostility", "Aggression");
  for (Slice s : kSlices) {
    out += fmt::format("  {:<12} {:<28} {:<28}\n", to_string(s), group_cell_text(t.cells[index_of(s)][0]),
                       group_cell_text(t.cells[index_of(s)][1]));
  }
  out += "\n";
}

void subscales_text(std::string& out, std::string_view title, const SubscaleMatrix& m) {
  out += fmt::format("{}\n", title);
  out += fmt::format("  {:<20} {:<28} {:<28}\n", "Subscale", "Hostility", "Aggression");
  for (Subscale sub : kSubscales) {
    for (Slice s : kSlices) {
      const auto& row = m.cells[static_cast<std::size_t>(sub)][index_of(s)];
      out += fmt::format("  {:<20} {:<28} {:<28}\n", fmt::format("{} {}", to_string(sub), to_string(s)),
                         cell_text(row[0]), cell_text(row[1]));
    }
  }
  out += "\n";
}

}  // namespace

std::string report_to_text(const EvaluationReport& report) {
  std::string out;
  agreement_text(out, "Model vs human ratings", report.model_vs_human);
  if (report.rater1_vs_rater2) agreement_text(out, "Rater 1 vs rater 2", *report.rater1_vs_rater2);
  if (report.icc) {
    out += "Item-level ICC\n";
    for (Construct c : kConstructs) {
      const auto& s = (*report.icc)[index_of(c)];
      if (s.icc2_1) {
        out += fmt::format("  {:<12} ICC(2,1)={:.3f} ICC(3,1)={:.3f} items={}\n", to_string(c), *s.icc2_1,
                           *s.icc3_1, s.n_items);
      } else {
        out += fmt::format("  {:<12} n/a ({})\n", to_string(c), s.reason);
      }
    }
    out += "\n";
  }
  if (report.human_groups) groups_text(out, "Group differences, human ratings", *report.human_groups);
  if (report.model_groups) groups_text(out, "Group differences, model ratings", *report.model_groups);
  if (report.subscales_human) subscales_text(out, "Self-report subscales vs human ratings", *report.subscales_human);
  if (report.subscales_model) subscales_text(out, "Self-report subscales vs model ratings", *report.subscales_model);
  out += "* p < .05, ** p < .01, *** p < .001\n";
  return out;
}

}  // namespace aihq
