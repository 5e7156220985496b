#pragma once

#include <Eigen/Dense>
#include <vector>

namespace dss {

enum class Exec { Serial, Parallel };

// Worker count: OpenMP max, capped by the DSS_THREADS environment variable.
int worker_count();
void apply_thread_cap();

// Mean via fixed-width blocks (256 draws) with compensated summation inside each
// block and across block partials, in index order. The block structure does not
// depend on the thread count, so serial and parallel execution agree bitwise.
double chunked_mean(const Eigen::VectorXd& v);

double kahan_sum(const std::vector<double>& v);

// Type-7 quantile (linear interpolation of order statistics) on a copy.
double quantile(const Eigen::VectorXd& v, double q);

}  // namespace dss
