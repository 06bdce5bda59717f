#include "vrt/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "vrt/kernels.hpp"

namespace vrt {

namespace {

constexpr char kCacheMagic[8] = {'V', 'R', 'T', 'O', 'P', '0', '0', '1'};
constexpr std::uint32_t kCacheVersion = 1;

Eigen::MatrixXd tikhonov_gram(TikhonovKind kind, std::size_t p,
                              const VoxelGrid& grid) {
  if (kind == TikhonovKind::Identity)
    return Eigen::MatrixXd::Identity(p, p);

  // Q stacks first differences along both grid axes; Q^T Q is the grid
  // Laplacian (neighbor count on the diagonal, -1 off-diagonal).
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
  const int nx = grid.nx();
  const int ny = grid.ny();
  auto couple = [&gram](int a, int b) {
    gram(a, a) += 1.0;
    gram(b, b) += 1.0;
    gram(a, b) -= 1.0;
    gram(b, a) -= 1.0;
  };
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix + 1 < nx; ++ix)
      couple(iy * nx + ix, iy * nx + ix + 1);
  for (int iy = 0; iy + 1 < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      couple(iy * nx + ix, (iy + 1) * nx + ix);
  return gram;
}

ProjectionOperator::Matrix solve_vrti(const WeightMatrix& w,
                                      const VrtiConfig& cfg,
                                      const VoxelGrid& grid) {
  if (cfg.alpha <= 0.0) throw std::invalid_argument("alpha must be > 0");
  const Eigen::MatrixXd wd = w.to_dense();
  const std::size_t p = w.cols();
  Eigen::MatrixXd normal = wd.transpose() * wd;
  normal += cfg.alpha * tikhonov_gram(cfg.q_kind, p, grid);

  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "regularized normal matrix is not positive definite; use identity Q "
        "or a larger alpha");
  return llt.solve(wd.transpose());
}

void check_k(int k, Eigen::Index l) {
  if (k < 0 || k > l)
    throw std::invalid_argument("subspace dimension k out of range [0, L]");
}

}  // namespace

const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Vrti: return "vrti";
    case EstimatorKind::SubVrt: return "subvrt";
    case EstimatorKind::Lsvrt: return "lsvrt";
  }
  return "unknown";
}

ProjectionOperator::ProjectionOperator(Matrix matrix, EstimatorKind kind,
                                       std::uint64_t fingerprint)
    : matrix_(std::move(matrix)), kind_(kind), fingerprint_(fingerprint) {
  if (!matrix_.allFinite())
    throw std::invalid_argument("projection operator has non-finite entries");
}

ProjectionOperator build_vrti(const WeightMatrix& w, const VrtiConfig& cfg,
                              const VoxelGrid& grid, std::uint64_t fingerprint) {
  return ProjectionOperator(solve_vrti(w, cfg, grid), EstimatorKind::Vrti,
                            fingerprint);
}

ProjectionOperator build_subvrt(const ProjectionOperator& vrti,
                                const EigenDecomposition& eig,
                                const SubVrtConfig& cfg,
                                std::uint64_t fingerprint) {
  const Eigen::Index l = eig.u.rows();
  check_k(cfg.k, l);
  if (vrti.matrix().cols() != l)
    throw std::invalid_argument("operator and eigendecomposition disagree on L");
  const auto u_hat = eig.u.leftCols(cfg.k);
  ProjectionOperator::Matrix pi2 =
      vrti.matrix() - (vrti.matrix() * u_hat) * u_hat.transpose();
  return ProjectionOperator(std::move(pi2), EstimatorKind::SubVrt, fingerprint);
}

ProjectionOperator build_subvrt(const WeightMatrix& w, const VrtiConfig& cfg_v,
                                const EigenDecomposition& eig,
                                const SubVrtConfig& cfg_s, const VoxelGrid& grid,
                                std::uint64_t fingerprint) {
  ProjectionOperator vrti = build_vrti(w, cfg_v, grid, fingerprint);
  return build_subvrt(vrti, eig, cfg_s, fingerprint);
}

std::vector<double> project_extrinsic(const EigenDecomposition& eig, int k,
                                      const std::vector<double>& y) {
  const Eigen::Index l = eig.u.rows();
  check_k(k, l);
  if (static_cast<Eigen::Index>(y.size()) != l)
    throw std::invalid_argument("measurement length does not match L");

  // leftCols(k) of the column-major U is contiguous, so the same buffer read
  // row-major is U_hat^T.
  std::vector<double> coeffs(static_cast<std::size_t>(k));
  kernels::gemv(eig.u.data(), static_cast<std::size_t>(k),
                static_cast<std::size_t>(l), y.data(), coeffs.data());
  std::vector<double> out = y;
  for (int j = 0; j < k; ++j)
    kernels::axpy(-coeffs[j], eig.u.col(j).data(), out.data(),
                  static_cast<std::size_t>(l));
  return out;
}

ProjectionOperator build_lsvrt(const WeightMatrix& w,
                               const ShrinkageCovariance& c_n,
                               const SpatialCovariance& c_x,
                               std::uint64_t fingerprint) {
  const Eigen::MatrixXd wd = w.to_dense();
  if (c_n.matrix.rows() != wd.rows())
    throw std::invalid_argument("C_n dimension does not match L");
  if (c_x.matrix.rows() != wd.cols())
    throw std::invalid_argument("C_x dimension does not match P");

  Eigen::LLT<Eigen::MatrixXd> llt_cn(c_n.matrix);
  if (llt_cn.info() != Eigen::Success)
    throw std::runtime_error("C_n is not positive definite");
  Eigen::LLT<Eigen::MatrixXd> llt_cx(c_x.matrix);
  if (llt_cx.info() != Eigen::Success)
    throw std::runtime_error("C_x is not positive definite");

  const Eigen::MatrixXd cn_inv_w = llt_cn.solve(wd);  // L x P
  const Eigen::MatrixXd cx_inv =
      llt_cx.solve(Eigen::MatrixXd::Identity(wd.cols(), wd.cols()));
  Eigen::MatrixXd bracket = wd.transpose() * cn_inv_w + cx_inv;
  bracket = 0.5 * (bracket + bracket.transpose()).eval();

  Eigen::LLT<Eigen::MatrixXd> llt_bracket(bracket);
  if (llt_bracket.info() != Eigen::Success)
    throw std::runtime_error("LSVRT normal matrix is not positive definite");
  ProjectionOperator::Matrix pi3 = llt_bracket.solve(cn_inv_w.transpose());
  return ProjectionOperator(std::move(pi3), EstimatorKind::Lsvrt, fingerprint);
}

MotionImage estimate_image(const ProjectionOperator& op,
                           const VarianceFrame& frame) {
  if (frame.y.size() != op.measurement_size())
    throw std::invalid_argument("frame length does not match operator L");
  MotionImage img;
  img.t = frame.t;
  img.x_hat.resize(op.image_size());
  kernels::gemv(op.matrix().data(), op.image_size(), op.measurement_size(),
                frame.y.data(), img.x_hat.data());
  return img;
}

Vec2 localize(const MotionImage& img, const VoxelGrid& grid) {
  if (img.x_hat.size() != grid.voxel_count())
    throw std::invalid_argument("image length does not match grid");
  std::size_t best = 0;
  for (std::size_t p = 1; p < img.x_hat.size(); ++p)
    if (img.x_hat[p] > img.x_hat[best]) best = p;
  return grid.centers()[best];
}

double max_relative_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double denom = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  return (a - b).cwiseAbs().maxCoeff() / denom;
}

ConnectionReport verify_estimator_connection(
    const WeightMatrix& w, const VrtiConfig& cfg_v,
    const std::vector<VarianceFrame>& calibration, const SpatialCovariance& c_x,
    const VoxelGrid& grid, const std::vector<int>& s_identity_ks) {
  ConnectionReport report;

  const SampleCovariance sample = sample_covariance(calibration);
  const EigenDecomposition eig = eigen_networks(sample);
  const ShrinkageCovariance shrunk = ledoit_wolf(calibration);
  const Eigen::Index l = eig.u.rows();

  report.nu = shrunk.nu;
  report.mu = shrunk.mu;

  // S-matrix identity U S U^T = I - U_hat U_hat^T and the matching Pi_2
  // factorization hold for any k, independent of nu.
  std::vector<int> ks = s_identity_ks;
  if (ks.empty()) ks = {1, static_cast<int>(l)};
  const ProjectionOperator vrti = build_vrti(w, cfg_v, grid);
  for (int k : ks) {
    check_k(k, l);
    const Eigen::MatrixXd usu =
        eig.u.rightCols(l - k) * eig.u.rightCols(l - k).transpose();
    const Eigen::MatrixXd proj =
        Eigen::MatrixXd::Identity(l, l) -
        eig.u.leftCols(k) * eig.u.leftCols(k).transpose();
    report.s_identity_dev.push_back({k, (usu - proj).cwiseAbs().maxCoeff()});
  }
  {
    const int k = ks.front();
    const ProjectionOperator pi2_prod =
        build_subvrt(vrti, eig, SubVrtConfig{k});
    const Eigen::MatrixXd usu =
        eig.u.rightCols(l - k) * eig.u.rightCols(l - k).transpose();
    const Eigen::MatrixXd pi2_route = vrti.matrix() * usu;
    report.pi2_factored_dev =
        max_relative_deviation(pi2_prod.matrix(), pi2_route);
  }

  if (shrunk.nu <= 0.0 || shrunk.nu >= 1.0) {
    report.skipped = true;
    report.skip_reason = "nu = " + std::to_string(shrunk.nu) +
                         " leaves c1 or c2 undefined";
    return report;
  }
  report.c1 = 1.0 / (1.0 - shrunk.nu);
  report.c2 = (1.0 - shrunk.nu) / (shrunk.nu * shrunk.mu);

  // Route A: the production build straight from the shrunk covariance.
  const ProjectionOperator pi3_direct = build_lsvrt(w, shrunk, c_x);

  // Shared bracket (W^T Cn^-1 W + Cx^-1); only the trailing Cn^-1 differs
  // between the routes below.
  const Eigen::MatrixXd wd = w.to_dense();
  Eigen::LLT<Eigen::MatrixXd> llt_cn(shrunk.matrix);
  Eigen::LLT<Eigen::MatrixXd> llt_cx(c_x.matrix);
  if (llt_cn.info() != Eigen::Success || llt_cx.info() != Eigen::Success)
    throw std::runtime_error("covariance factorization failed");
  Eigen::MatrixXd bracket =
      wd.transpose() * llt_cn.solve(wd) +
      llt_cx.solve(Eigen::MatrixXd::Identity(wd.cols(), wd.cols()));
  bracket = 0.5 * (bracket + bracket.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt_bracket(bracket);

  const double lambda_1 = eig.eigenvalues.size() ? eig.eigenvalues[0] : 0.0;
  const double eps = 1e-12 * lambda_1;

  Eigen::VectorXd shrunk_spectrum(l);
  Eigen::VectorXd literal_spectrum(l);
  report.valid_dim = 0;
  for (Eigen::Index i = 0; i < l; ++i) {
    const double lam = eig.eigenvalues[i];
    const double lam_shrunk = shrunk.nu * shrunk.mu + (1.0 - shrunk.nu) * lam;
    shrunk_spectrum[i] = 1.0 / lam_shrunk;
    if (lam > eps) {
      ++report.valid_dim;
      literal_spectrum[i] = report.c1 * (1.0 / lam + report.c2);
    } else {
      literal_spectrum[i] = 1.0 / lam_shrunk;
    }
  }

  auto pi3_with_trailing = [&](const Eigen::VectorXd& spectrum) {
    const Eigen::MatrixXd cn_inv =
        eig.u * spectrum.asDiagonal() * eig.u.transpose();
    return Eigen::MatrixXd(llt_bracket.solve(wd.transpose() * cn_inv));
  };

  report.pi3_consistent_dev = max_relative_deviation(
      pi3_direct.matrix(), pi3_with_trailing(shrunk_spectrum));
  report.pi3_paper_literal_dev = max_relative_deviation(
      pi3_direct.matrix(), pi3_with_trailing(literal_spectrum));
  return report;
}

void save_operator(const ProjectionOperator& op, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write operator cache: " + path);
  out.write(kCacheMagic, sizeof(kCacheMagic));
  const std::uint32_t version = kCacheVersion;
  const std::uint32_t kind = static_cast<std::uint32_t>(op.kind());
  const std::uint64_t rows = op.matrix().rows();
  const std::uint64_t cols = op.matrix().cols();
  const std::uint64_t fp = op.fingerprint();
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(&kind), sizeof(kind));
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  out.write(reinterpret_cast<const char*>(&fp), sizeof(fp));
  out.write(reinterpret_cast<const char*>(op.matrix().data()),
            static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!out) throw std::runtime_error("short write to operator cache: " + path);
}

ProjectionOperator load_operator(const std::string& path,
                                 std::uint64_t expected_fingerprint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open operator cache: " + path);
  char magic[8];
  std::uint32_t version = 0, kind = 0;
  std::uint64_t rows = 0, cols = 0, fp = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&kind), sizeof(kind));
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  in.read(reinterpret_cast<char*>(&fp), sizeof(fp));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not an operator cache file: " + path);
  if (version != kCacheVersion)
    throw std::runtime_error("unsupported operator cache version in " + path);
  if (fp != expected_fingerprint)
    throw std::runtime_error("stale operator cache (fingerprint mismatch): " +
                             path);
  ProjectionOperator::Matrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!in) throw std::runtime_error("truncated operator cache: " + path);
  return ProjectionOperator(std::move(m), static_cast<EstimatorKind>(kind), fp);
}

}  // namespace vrt
