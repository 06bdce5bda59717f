#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "vrt/covariance.hpp"
#include "vrt/forward_model.hpp"
#include "vrt/geometry.hpp"
#include "vrt/ingest.hpp"

namespace vrt {

enum class TikhonovKind { Identity, FirstDifference };

struct VrtiConfig {
  double alpha = 100.0;
  TikhonovKind q_kind = TikhonovKind::Identity;
};

struct SubVrtConfig {
  int k = 0;  // intrinsic-subspace dimension, 0..L
};

enum class EstimatorKind { Vrti, SubVrt, Lsvrt };

const char* estimator_name(EstimatorKind kind);

/// Precomputed P x L linear reconstruction operator. Applying it to a
/// variance frame costs one L*P multiply-add pass.
class ProjectionOperator {
 public:
  using Matrix =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  ProjectionOperator(Matrix matrix, EstimatorKind kind, std::uint64_t fingerprint);

  const Matrix& matrix() const { return matrix_; }
  EstimatorKind kind() const { return kind_; }
  std::uint64_t fingerprint() const { return fingerprint_; }
  std::size_t image_size() const { return matrix_.rows(); }
  std::size_t measurement_size() const { return matrix_.cols(); }

 private:
  Matrix matrix_;
  EstimatorKind kind_;
  std::uint64_t fingerprint_;
};

struct MotionImage {
  std::vector<double> x_hat;  // length P, unconstrained sign
  int t = 0;
};

/// Tikhonov-regularized VRTI operator (W^T W + alpha Q^T Q)^-1 W^T, computed
/// through an SPD factorization. The grid supplies dimensions for the
/// first-difference Q.
ProjectionOperator build_vrti(const WeightMatrix& w, const VrtiConfig& cfg,
                              const VoxelGrid& grid, std::uint64_t fingerprint = 0);

/// SubVRT operator Pi_1 (I - U_hat U_hat^T) as a rank-k update of an already
/// built VRTI operator; k = 0 leaves the operator bit-identical.
ProjectionOperator build_subvrt(const ProjectionOperator& vrti,
                                const EigenDecomposition& eig,
                                const SubVrtConfig& cfg,
                                std::uint64_t fingerprint = 0);

ProjectionOperator build_subvrt(const WeightMatrix& w, const VrtiConfig& cfg_v,
                                const EigenDecomposition& eig,
                                const SubVrtConfig& cfg_s, const VoxelGrid& grid,
                                std::uint64_t fingerprint = 0);

/// Extrinsic-subspace projection (I - U_hat U_hat^T) y.
std::vector<double> project_extrinsic(const EigenDecomposition& eig, int k,
                                      const std::vector<double>& y);

/// LSVRT operator (W^T Cn^-1 W + Cx^-1)^-1 W^T Cn^-1 with zero prior mean;
/// all inverses are applied through factored solves.
ProjectionOperator build_lsvrt(const WeightMatrix& w,
                               const ShrinkageCovariance& c_n,
                               const SpatialCovariance& c_x,
                               std::uint64_t fingerprint = 0);

MotionImage estimate_image(const ProjectionOperator& op,
                           const VarianceFrame& frame);

/// Center coordinate of the voxel with the maximum image value; ties break
/// toward the lowest voxel index.
Vec2 localize(const MotionImage& img, const VoxelGrid& grid);

/// Numerical check of the SubVRT/LSVRT connection. The consistent route
/// replaces the trailing Cn^-1 by U diag(1/(nu mu + (1-nu) lambda_i)) U^T;
/// the literal route uses c1 (Lambda^-1 + c2 I) on the part of the spectrum
/// above eps = 1e-12 * lambda_1 and is reported, not asserted.
struct ConnectionReport {
  bool skipped = false;       // nu in {0, 1}: c1 or c2 undefined
  std::string skip_reason;
  double nu = 0.0;
  double mu = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  int valid_dim = 0;          // eigenvalues above eps
  double pi3_consistent_dev = 0.0;
  double pi3_paper_literal_dev = 0.0;
  double pi2_factored_dev = 0.0;                      // Pi_2 vs Pi_1 U S U^T
  std::vector<std::pair<int, double>> s_identity_dev;  // per requested k
};

ConnectionReport verify_estimator_connection(
    const WeightMatrix& w, const VrtiConfig& cfg_v,
    const std::vector<VarianceFrame>& calibration, const SpatialCovariance& c_x,
    const VoxelGrid& grid, const std::vector<int>& s_identity_ks = {});

/// Max-norm relative deviation max|a-b| / max|a|.
double max_relative_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Binary operator cache with a format-version header and the provenance
/// fingerprint; loading rejects version or fingerprint mismatches.
void save_operator(const ProjectionOperator& op, const std::string& path);
ProjectionOperator load_operator(const std::string& path,
                                 std::uint64_t expected_fingerprint);

}  // namespace vrt
