#include "vrt/forward_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace vrt {

WeightMatrix::WeightMatrix(std::size_t links, std::size_t voxels,
                           WeightModelParams params,
                           std::vector<std::size_t> row_ptr,
                           std::vector<int> col_idx, std::vector<double> values)
    : rows_(links),
      cols_(voxels),
      params_(params),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {}

double WeightMatrix::at(std::size_t link, std::size_t voxel) const {
  for (std::size_t k = row_ptr_[link]; k < row_ptr_[link + 1]; ++k)
    if (col_idx_[k] == static_cast<int>(voxel)) return values_[k];
  return 0.0;
}

Eigen::MatrixXd WeightMatrix::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(rows_, cols_);
  for (std::size_t l = 0; l < rows_; ++l)
    for (std::size_t k = row_ptr_[l]; k < row_ptr_[l + 1]; ++k)
      dense(l, col_idx_[k]) = values_[k];
  return dense;
}

WeightMatrix build_weight_matrix(const SensorLayout& layout, const LinkSet& links,
                                 const VoxelGrid& grid,
                                 const WeightModelParams& params) {
  if (params.lambda_ell <= 0.0 || params.phi <= 0.0)
    throw std::invalid_argument("weight model requires lambda > 0 and phi > 0");

  const auto& centers = grid.centers();
  std::vector<std::size_t> row_ptr{0};
  std::vector<int> col_idx;
  std::vector<double> values;
  row_ptr.reserve(links.size() + 1);

  for (const Link& link : links.links()) {
    const LinkGeometry geo = link_geometry(layout, link);  // rejects d_ij = 0
    const double weight = params.phi / std::sqrt(geo.length);
    const double bound = geo.length + params.lambda_ell;
    for (std::size_t p = 0; p < centers.size(); ++p) {
      const double path = distance(geo.tx_pos, centers[p]) +
                          distance(geo.rx_pos, centers[p]);
      if (path < bound) {  // strict inequality: boundary voxels get zero
        col_idx.push_back(static_cast<int>(p));
        values.push_back(weight);
      }
    }
    row_ptr.push_back(values.size());
  }
  return WeightMatrix(links.size(), centers.size(), params, std::move(row_ptr),
                      std::move(col_idx), std::move(values));
}

CoverageReport coverage_report(const WeightMatrix& w) {
  CoverageReport report;
  report.link_count.assign(w.cols(), 0);
  for (std::size_t l = 0; l < w.rows(); ++l)
    for (std::size_t k = w.row_ptr()[l]; k < w.row_ptr()[l + 1]; ++k)
      if (w.values()[k] > 0.0) ++report.link_count[w.col_idx()[k]];
  for (std::size_t p = 0; p < w.cols(); ++p)
    if (report.link_count[p] == 0)
      report.uncovered_voxels.push_back(static_cast<int>(p));
  return report;
}

void export_weights_csv(const WeightMatrix& w, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write weights file: " + path);
  out << "link_index,voxel_index,weight\n";
  char buf[80];
  for (std::size_t l = 0; l < w.rows(); ++l)
    for (std::size_t k = w.row_ptr()[l]; k < w.row_ptr()[l + 1]; ++k) {
      std::snprintf(buf, sizeof(buf), "%zu,%d,%.17g\n", l, w.col_idx()[k],
                    w.values()[k]);
      out << buf;
    }
}

}  // namespace vrt
