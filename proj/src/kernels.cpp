#include "solvable_pg/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace solvable_pg {

double Csr::row_sum(int r) const {
  double total = 0.0;
  for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) total += val[k];
  return total;
}

Csr Csr::transposed() const {
  Csr t;
  t.rows = cols;
  t.cols = rows;
  t.row_ptr.assign(static_cast<std::size_t>(cols) + 1, 0);
  for (int c : col) ++t.row_ptr[c + 1];
  for (int i = 0; i < cols; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
  t.col.resize(col.size());
  t.val.resize(val.size());
  std::vector<int> fill(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (int r = 0; r < rows; ++r) {
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const int dst = fill[col[k]]++;
      t.col[dst] = r;
      t.val[dst] = val[k];
    }
  }
  return t;
}

namespace kernels {

void push_forward(const Csr& pt, std::span<const double> in, std::span<double> out) {
  const int n = pt.rows;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = pt.row_ptr[j]; k < pt.row_ptr[j + 1]; ++k) acc += pt.val[k] * in[pt.col[k]];
    out[j] = acc;
  }
}

void push_forward_serial(const Csr& p, std::span<const double> in, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (int i = 0; i < p.rows; ++i) {
    const double m = in[i];
    if (m == 0.0) continue;
    for (int k = p.row_ptr[i]; k < p.row_ptr[i + 1]; ++k) out[p.col[k]] += m * p.val[k];
  }
}

Eigen::MatrixXd multiply(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd c(a.rows(), b.cols());
  c.noalias() = a * b;
  return c;
}

Eigen::MatrixXd multiply_serial(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(a.rows(), b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      for (Eigen::Index i = 0; i < a.rows(); ++i) c(i, j) += a(i, k) * bkj;
    }
  }
  return c;
}

double max_row_l1(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().rowwise().sum().maxCoeff();
}

Eigen::MatrixXd to_dense(const Csr& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.rows, m.cols);
  for (int r = 0; r < m.rows; ++r) {
    for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) d(r, m.col[k]) += m.val[k];
  }
  return d;
}

}  // namespace kernels

void set_threads(int n) {
  if (n <= 0) return;
  omp_set_num_threads(n);
  Eigen::setNbThreads(n);
}

}  // namespace solvable_pg
