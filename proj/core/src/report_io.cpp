#include "flowgnn/report_io.hpp"

#include <fstream>
#include <iomanip>

#include "flowgnn/errors.hpp"

namespace flowgnn::eval {

using nlohmann::json;

json report_to_json(const MetricsReport& report) {
  json j;
  if (report.classification) {
    j["classification"] = {{"accuracy", report.classification->accuracy},
                           {"macro_f1", report.classification->macro_f1},
                           {"per_class_f1", report.classification->per_class_f1}};
  }
  j["regression"] = {{"mae_ge10", report.regression.mae},
                     {"r2_ge10", report.regression.r2},
                     {"r2_ge10_raw", report.regression.r2_raw},
                     {"count", report.regression.count}};
  j["per_graph"] = json::array();
  for (const GraphError& g : report.per_graph) {
    j["per_graph"].push_back({{"graph_id", g.graph_id}, {"num_nodes", g.num_nodes}, {"mae", g.mae}});
  }
  j["links"] = json::array();
  for (const LinkPrediction& l : report.links) {
    j["links"].push_back({{"graph_id", l.graph_id},
                          {"link", l.link},
                          {"target", l.target},
                          {"predicted", l.predicted},
                          {"true_class", l.true_class},
                          {"predicted_class", l.predicted_class}});
  }
  return j;
}

MetricsReport report_from_json(const json& j) {
  try {
    MetricsReport r;
    if (j.contains("classification")) {
      const json& c = j.at("classification");
      r.classification = ClassificationMetrics{c.at("accuracy").get<double>(),
                                               c.at("per_class_f1").get<std::vector<double>>(),
                                               c.at("macro_f1").get<double>()};
    }
    const json& reg = j.at("regression");
    r.regression = {reg.at("mae_ge10").get<double>(), reg.at("r2_ge10").get<double>(),
                    reg.at("r2_ge10_raw").get<double>(), reg.at("count").get<std::size_t>()};
    for (const json& g : j.at("per_graph")) {
      r.per_graph.push_back({g.at("graph_id").get<std::string>(), g.at("num_nodes").get<std::size_t>(),
                             g.at("mae").get<double>()});
    }
    for (const json& l : j.at("links")) {
      r.links.push_back({l.at("graph_id").get<std::string>(), l.at("link").get<std::size_t>(),
                         l.at("target").get<double>(), l.at("predicted").get<double>(),
                         l.at("true_class").get<int>(), l.at("predicted_class").get<int>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("malformed metrics report: ") + e.what());
  }
}

void write_report(const MetricsReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setw(2) << report_to_json(report) << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

MetricsReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open metrics report " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(1, std::string("metrics report is not valid JSON: ") + e.what());
  }
  return report_from_json(j);
}

void write_predictions_csv(const MetricsReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  out << "graph_id,link,target,predicted,true_class,predicted_class\n";
  for (const LinkPrediction& l : report.links) {
    out << l.graph_id << ',' << l.link << ',' << l.target << ',' << l.predicted << ','
        << l.true_class << ',' << l.predicted_class << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

void write_curves_csv(const std::vector<EpochRecord>& curves, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  out << "epoch,train_loss,val_loss,val_metric\n";
  for (const EpochRecord& e : curves) {
    out << e.epoch << ',' << e.train_loss << ',' << e.val_loss << ',' << e.val_metric << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace flowgnn::eval
