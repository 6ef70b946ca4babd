#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hetpredict {

struct ErrorRecord {
  std::string workflow;
  std::string task;
  std::string instance_id;
  std::string machine;
  std::string method;
  double predicted = 0.0;  // seconds
  double actual = 0.0;     // seconds
  double error = 0.0;      // |predicted - actual| / actual
};

// Relative prediction error as a fraction; may exceed 1. Throws ZeroActual
// unless actual > 0.
double task_error(double predicted, double actual);

ErrorRecord make_error_record(std::string workflow, std::string task, std::string instance_id, std::string machine,
                              std::string method, double predicted, double actual);

enum class GroupBy { Machine, Workflow, Method, All };

struct GroupError {
  std::string group;
  double mpe = 0.0;  // fraction
  std::size_t count = 0;
};

// Median prediction error per group, groups in name order; All yields a single
// group named "all". Throws EmptyInput.
std::vector<GroupError> median_prediction_error(std::span<const ErrorRecord> records, GroupBy group_by);

struct CdfPoint {
  double error = 0.0;
  double fraction = 0.0;
};

// Empirical CDF as a step function: one point per distinct error value, carrying
// the fraction of records with error <= that value. Throws EmptyInput.
std::vector<CdfPoint> error_cdf(std::span<const ErrorRecord> records);

void write_error_report(std::ostream& out, std::span<const ErrorRecord> records);

}  // namespace hetpredict
