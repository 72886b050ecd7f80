#pragma once

#include <string>
#include <vector>

#include "gridred/centrality.hpp"
#include "gridred/evidential.hpp"
#include "gridred/metrics.hpp"

namespace gridred {

enum class TableFormat { Csv, Json };

std::string format_double(double v);

// node_id, score, rank
std::string score_table(const GridCase& c, const NodeScoreVector& sv,
                        TableFormat fmt);

// node_id, u_min, u_max, u_avg, rank, delta_S
std::string fusion_table(const GridCase& c, const NodeScoreVector& sv,
                         const std::vector<FusionRow>& rows, TableFormat fmt);

// metric, <model columns...>
std::string metrics_table(const std::vector<std::string>& model_names,
                          const std::vector<TopologyReport>& reports,
                          TableFormat fmt);

// metric, model, rel_error (undefined errors serialized as empty/null)
std::string errors_table(const std::vector<std::string>& model_names,
                         const std::vector<ErrorIndex>& errors,
                         TableFormat fmt);

// matrix dump with a header row of bus ids (CSV only)
std::string matrix_csv(const std::vector<int>& col_ids,
                       const Eigen::MatrixXd& m);

}  // namespace gridred
