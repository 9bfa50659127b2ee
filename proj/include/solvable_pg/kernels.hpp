#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace solvable_pg {

/// Compressed sparse rows of a row-stochastic matrix.
struct Csr {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
  double row_sum(int r) const;
  Csr transposed() const;
};

namespace kernels {

/// out = in * P for a row distribution `in`. Parallel gather over columns of
/// the pre-transposed matrix `pt` (= P^T).
void push_forward(const Csr& pt, std::span<const double> in, std::span<double> out);
/// Scatter over rows of P; serial reference for push_forward.
void push_forward_serial(const Csr& p, std::span<const double> in, std::span<double> out);

/// a * b through Eigen's blocked GEMM (OpenMP-parallel when threads > 1).
Eigen::MatrixXd multiply(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
/// Plain triple loop, serial reference for multiply.
Eigen::MatrixXd multiply_serial(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// max_i sum_j |a_ij - b_ij|.
double max_row_l1(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

Eigen::MatrixXd to_dense(const Csr& m);

}  // namespace kernels

/// Caps OpenMP (and Eigen) threads; n <= 0 leaves the runtime default.
void set_threads(int n);

}  // namespace solvable_pg
