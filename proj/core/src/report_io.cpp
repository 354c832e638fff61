#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entgraph/prediction.hpp"

namespace entgraph {

using nlohmann::json;

json report_to_json(const GeneralizationReport& generalization, const WmdReport& wmd, const json& meta) {
  json gen = json::array();
  for (const auto& row : generalization.rows) {
    gen.push_back({{"depth", row.depth},
                   {"mean", row.mean},
                   {"ci95", row.ci95},
                   {"per_fold", row.per_fold},
                   {"exact_mean", row.exact_mean},
                   {"exact_ci95", row.exact_ci95},
                   {"exact_per_fold", row.exact_per_fold}});
  }
  json rows = json::array();
  for (const auto& row : wmd.rows) {
    rows.push_back({{"depth", row.depth},
                    {"count", row.box.count},
                    {"median", row.box.median},
                    {"q1", row.box.q1},
                    {"q3", row.box.q3},
                    {"whisker_lo", row.box.whisker_lo},
                    {"whisker_hi", row.box.whisker_hi},
                    {"min", row.box.min},
                    {"max", row.box.max},
                    {"samples", row.samples}});
  }
  return json{{"version", kReportFormatVersion},
              {"meta", meta},
              {"generalization", std::move(gen)},
              {"wmd",
               {{"rows", std::move(rows)},
                {"paths_total", wmd.paths_total},
                {"paths_without_root", wmd.paths_without_root},
                {"dead_ends", wmd.dead_ends},
                {"unanchored", wmd.unanchored},
                {"undefined_distances", wmd.undefined_distances}}}};
}

std::string generalization_csv(const GeneralizationReport& report) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "depth,mean,ci,exact_mean,exact_ci\n";
  for (const auto& row : report.rows) {
    out << row.depth << ',' << row.mean << ',' << row.ci95 << ',' << row.exact_mean << ',' << row.exact_ci95
        << '\n';
  }
  return out.str();
}

std::string wmd_csv(const WmdReport& report) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "depth,count,median,q1,q3,lo,hi\n";
  for (const auto& row : report.rows) {
    const auto& b = row.box;
    out << row.depth << ',' << b.count << ',' << b.median << ',' << b.q1 << ',' << b.q3 << ',' << b.whisker_lo
        << ',' << b.whisker_hi << '\n';
  }
  return out.str();
}

}  // namespace entgraph
