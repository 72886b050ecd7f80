#include "gridred/export.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace gridred {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string score_table(const GridCase& c, const NodeScoreVector& sv,
                        TableFormat fmt) {
  if (fmt == TableFormat::Json) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < c.n_buses(); ++i)
      rows.push_back({{"node_id", c.buses[i].id},
                      {"score", sv.scores[i]},
                      {"rank", sv.ranks[i]}});
    return rows.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "node_id,score,rank\n";
  for (int i = 0; i < c.n_buses(); ++i)
    os << c.buses[i].id << "," << format_double(sv.scores[i]) << ","
       << sv.ranks[i] << "\n";
  return os.str();
}

std::string fusion_table(const GridCase& c, const NodeScoreVector& sv,
                         const std::vector<FusionRow>& rows, TableFormat fmt) {
  if (fmt == TableFormat::Json) {
    nlohmann::json out = nlohmann::json::array();
    for (int i = 0; i < c.n_buses(); ++i)
      out.push_back({{"node_id", c.buses[i].id},
                     {"u_min", rows[i].u_min},
                     {"u_max", rows[i].u_max},
                     {"u_avg", rows[i].u_avg},
                     {"rank", sv.ranks[i]},
                     {"delta_S", rows[i].delta_s}});
    return out.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "node_id,u_min,u_max,u_avg,rank,delta_S\n";
  for (int i = 0; i < c.n_buses(); ++i)
    os << c.buses[i].id << "," << format_double(rows[i].u_min) << ","
       << format_double(rows[i].u_max) << "," << format_double(rows[i].u_avg)
       << "," << sv.ranks[i] << "," << format_double(rows[i].delta_s) << "\n";
  return os.str();
}

std::string metrics_table(const std::vector<std::string>& model_names,
                          const std::vector<TopologyReport>& reports,
                          TableFormat fmt) {
  const auto& names = metric_names();
  if (fmt == TableFormat::Json) {
    nlohmann::json rows = nlohmann::json::array();
    for (int m = 0; m < kMetricCount; ++m) {
      nlohmann::json row;
      row["metric"] = std::string(names[m]);
      for (size_t k = 0; k < reports.size(); ++k)
        row[model_names[k]] = metric_values(reports[k])[m];
      rows.push_back(row);
    }
    return rows.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "metric";
  for (const auto& n : model_names) os << "," << n;
  os << "\n";
  for (int m = 0; m < kMetricCount; ++m) {
    os << names[m];
    for (const auto& r : reports) os << "," << format_double(metric_values(r)[m]);
    os << "\n";
  }
  return os.str();
}

std::string errors_table(const std::vector<std::string>& model_names,
                         const std::vector<ErrorIndex>& errors,
                         TableFormat fmt) {
  const auto& names = metric_names();
  if (fmt == TableFormat::Json) {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t k = 0; k < errors.size(); ++k)
      for (int m = 0; m < kMetricCount; ++m) {
        nlohmann::json row;
        row["metric"] = std::string(names[m]);
        row["model"] = model_names[k];
        if (std::isnan(errors[k].errors[m]))
          row["rel_error"] = nullptr;
        else
          row["rel_error"] = errors[k].errors[m];
        rows.push_back(row);
      }
    return rows.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "metric,model,rel_error\n";
  for (size_t k = 0; k < errors.size(); ++k)
    for (int m = 0; m < kMetricCount; ++m) {
      os << names[m] << "," << model_names[k] << ",";
      if (!std::isnan(errors[k].errors[m]))
        os << format_double(errors[k].errors[m]);
      os << "\n";
    }
  return os.str();
}

std::string matrix_csv(const std::vector<int>& col_ids,
                       const Eigen::MatrixXd& m) {
  std::ostringstream os;
  for (size_t j = 0; j < col_ids.size(); ++j)
    os << (j ? "," : "") << col_ids[j];
  os << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << (j ? "," : "") << format_double(m(i, j));
    os << "\n";
  }
  return os.str();
}

}  // namespace gridred
