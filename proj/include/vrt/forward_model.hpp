#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "vrt/geometry.hpp"

namespace vrt {

struct WeightModelParams {
  double lambda_ell = 0.1;  // ellipse width parameter, meters
  double phi = 1.0;         // dimensionless scale
};

/// L x P elliptical weight matrix, stored sparse by row (CSR). Row l is
/// phi / sqrt(d_ij) on voxels strictly inside link l's ellipse
/// (d_ip + d_jp < d_ij + lambda), zero elsewhere.
class WeightMatrix {
 public:
  WeightMatrix(std::size_t links, std::size_t voxels, WeightModelParams params,
               std::vector<std::size_t> row_ptr, std::vector<int> col_idx,
               std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const WeightModelParams& params() const { return params_; }
  std::size_t nonzeros() const { return values_.size(); }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  double at(std::size_t link, std::size_t voxel) const;
  Eigen::MatrixXd to_dense() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  WeightModelParams params_;
  std::vector<std::size_t> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

WeightMatrix build_weight_matrix(const SensorLayout& layout, const LinkSet& links,
                                 const VoxelGrid& grid,
                                 const WeightModelParams& params);

struct CoverageReport {
  std::vector<int> link_count;          // per voxel: |{l : W_lp > 0}|
  std::vector<int> uncovered_voxels;    // voxels with count 0
};

CoverageReport coverage_report(const WeightMatrix& w);

/// Debug export as coordinate list `link_index,voxel_index,weight`.
void export_weights_csv(const WeightMatrix& w, const std::string& path);

}  // namespace vrt
