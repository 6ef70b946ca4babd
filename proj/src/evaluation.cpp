#include "hetpredict/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "hetpredict/csv.hpp"
#include "hetpredict/error.hpp"
#include "hetpredict/stats.hpp"

namespace hetpredict {

double task_error(double predicted, double actual) {
  if (!(actual > 0.0)) throw Error(ErrorCode::ZeroActual, "actual runtime must be positive");
  return std::abs((predicted - actual) / actual);
}

ErrorRecord make_error_record(std::string workflow, std::string task, std::string instance_id, std::string machine,
                              std::string method, double predicted, double actual) {
  return ErrorRecord{std::move(workflow), std::move(task), std::move(instance_id), std::move(machine),
                     std::move(method),   predicted,       actual,                 task_error(predicted, actual)};
}

std::vector<GroupError> median_prediction_error(std::span<const ErrorRecord> records, GroupBy group_by) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no error records");
  std::map<std::string, std::vector<double>> groups;
  for (const auto& r : records) {
    switch (group_by) {
      case GroupBy::Machine: groups[r.machine].push_back(r.error); break;
      case GroupBy::Workflow: groups[r.workflow].push_back(r.error); break;
      case GroupBy::Method: groups[r.method].push_back(r.error); break;
      case GroupBy::All: groups["all"].push_back(r.error); break;
    }
  }
  std::vector<GroupError> out;
  for (const auto& [name, errors] : groups) out.push_back({name, stats::median(errors), errors.size()});
  return out;
}

std::vector<CdfPoint> error_cdf(std::span<const ErrorRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no error records");
  std::vector<double> errors;
  errors.reserve(records.size());
  for (const auto& r : records) errors.push_back(r.error);
  std::sort(errors.begin(), errors.end());

  const auto n = static_cast<double>(errors.size());
  std::vector<CdfPoint> cdf;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (i + 1 < errors.size() && errors[i + 1] == errors[i]) continue;
    cdf.push_back({errors[i], i + 1 == errors.size() ? 1.0 : static_cast<double>(i + 1) / n});
  }
  return cdf;
}

void write_error_report(std::ostream& out, std::span<const ErrorRecord> records) {
  out << "workflow,task,instance_id,machine,method,predicted_s,actual_s,error\n";
  for (const auto& r : records) {
    out << r.workflow << ',' << r.task << ',' << r.instance_id << ',' << r.machine << ',' << r.method << ','
        << csv::fixed(r.predicted, 3) << ',' << csv::fixed(r.actual, 3) << ',' << csv::fixed(r.error, 6) << '\n';
  }
}

}  // namespace hetpredict
