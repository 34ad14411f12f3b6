#include "mech/symplin.hpp"

#include <Eigen/Dense>

namespace mech {

namespace {
constexpr double kRankTol = 1e-10;  // relative singular-value threshold
}

SkewForm::SkewForm(Mat m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InputError("SkewForm: matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (((m + m.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale)
    throw InputError("SkewForm: matrix is not antisymmetric within 1e-12");
  mat_ = 0.5 * (m - m.transpose());
}

Mat SymplecticBasis::basis_matrix() const {
  const int dim = static_cast<int>(u.rows() ? u.rows() : e.rows());
  Mat b(dim, k() + 2 * n());
  if (k() > 0) b.leftCols(k()) = u;
  if (n() > 0) {
    b.middleCols(k(), n()) = e;
    b.rightCols(n()) = f;
  }
  return b;
}

Mat SymplecticBasis::block_form() const {
  const int kk = k(), nn = n(), d = kk + 2 * nn;
  Mat b = Mat::Zero(d, d);
  if (nn > 0) {
    b.block(kk, kk + nn, nn, nn) = Mat::Identity(nn, nn);
    b.block(kk + nn, kk, nn, nn) = -Mat::Identity(nn, nn);
  }
  return b;
}

int numeric_rank(const Mat& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > rel_tol * sv[0]) ++r;
  return r;
}

namespace {

// Orthonormal kernel basis and an orthonormal complement seeded from the
// standard basis, so canonical inputs produce canonical outputs.
void split_kernel(const Mat& m, Mat* kernel, Mat* complement) {
  const int d = static_cast<int>(m.rows());
  if (m.cwiseAbs().maxCoeff() == 0.0) {
    *kernel = Mat::Identity(d, d);
    *complement = Mat(d, 0);
    return;
  }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > kRankTol * sv[0]) ++r;
  if (r % 2 != 0) --r;  // antisymmetric rank is even; a split near-pair joins the kernel
  *kernel = svd.matrixV().rightCols(d - r);
  if (r == 0) {
    *complement = Mat(d, 0);
    return;
  }
  if (r == d) {
    *complement = Mat::Identity(d, d);
    return;
  }
  // project standard basis away from the kernel, keep an orthonormal span
  Mat proj = Mat::Identity(d, d) - (*kernel) * kernel->transpose();
  Eigen::ColPivHouseholderQR<Mat> qr(proj);
  Mat q = qr.householderQ() * Mat::Identity(d, r);
  *complement = q;
}

}  // namespace

SymplecticBasis standard_form(const SkewForm& omega) {
  const Mat& m = omega.mat();
  const int d = omega.dim();

  Mat kernel, work;
  split_kernel(m, &kernel, &work);

  std::vector<Vec> es, fs;
  while (work.cols() > 0) {
    const int c = static_cast<int>(work.cols());
    // complete pivoting: the pair with the strongest pairing
    Mat pair = work.transpose() * m * work;
    int bi = 0, bj = 1;
    double best = -1.0;
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < c; ++j)
        if (std::abs(pair(i, j)) > best) {
          best = std::abs(pair(i, j));
          bi = i;
          bj = j;
        }
    Vec e = work.col(bi);
    Vec f = work.col(bj) / pair(bi, bj);
    // balance the pair so congruence residuals stay at roundoff even when
    // the pairing is small; omega(e, f) = 1 is preserved
    const double scale = std::sqrt(f.norm() / e.norm());
    e *= scale;
    f /= scale;
    f /= e.dot(m * f);

    // remaining columns, projected onto the omega-complement of span{e, f};
    // projecting twice keeps the residual at roundoff even when the pairing
    // used for f was small
    std::vector<Vec> rest;
    for (int i = 0; i < c; ++i) {
      if (i == bi || i == bj) continue;
      Vec cvec = work.col(i);
      for (int sweep = 0; sweep < 2; ++sweep) {
        const double wec = e.dot(m * cvec);
        const double wfc = f.dot(m * cvec);
        cvec += wfc * e - wec * f;
      }
      rest.push_back(cvec);
    }
    es.push_back(e);
    fs.push_back(f);
    if (rest.empty()) {
      work = Mat(d, 0);
      break;
    }
    Mat r(d, static_cast<int>(rest.size()));
    for (int i = 0; i < static_cast<int>(rest.size()); ++i) r.col(i) = rest[i];
    // re-orthonormalize for conditioning; the span is what matters
    Eigen::HouseholderQR<Mat> qr(r);
    work = qr.householderQ() * Mat::Identity(d, static_cast<int>(rest.size()));
  }

  // refinement sweeps: re-orthogonalize every pair against the earlier ones
  // and sharpen the unit pairings, so ill-conditioned late pairs do not leak
  const int n = static_cast<int>(es.size());
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        const Vec& ej = es[j];
        const Vec& fj = fs[j];
        es[i] += (fj.dot(m * es[i])) * ej - (ej.dot(m * es[i])) * fj;
        fs[i] += (fj.dot(m * fs[i])) * ej - (ej.dot(m * fs[i])) * fj;
      }
      const double scale = std::sqrt(fs[i].norm() / es[i].norm());
      es[i] *= scale;
      fs[i] /= scale;
      fs[i] /= es[i].dot(m * fs[i]);
    }
  }

  SymplecticBasis basis;
  basis.u = kernel;
  basis.e = Mat(d, n);
  basis.f = Mat(d, n);
  for (int i = 0; i < n; ++i) {
    basis.e.col(i) = es[i];
    basis.f.col(i) = fs[i];
  }
  return basis;
}

Mat symplectic_complement(const SkewForm& omega, const Mat& Y) {
  const int d = omega.dim();
  if (Y.rows() != d) throw InputError("symplectic_complement: Y has wrong row count");
  if (numeric_rank(omega.mat()) < d)
    throw RankError("symplectic_complement: form is degenerate");
  const int k = static_cast<int>(Y.cols());
  if (k == 0) throw InputError("symplectic_complement: Y is empty");
  if (numeric_rank(Y) < k) throw InputError("symplectic_complement: Y columns are dependent");

  // omega(v, y_j) = 0  <=>  (M y_j)^T v = 0
  Mat sys = (omega.mat() * Y).transpose();  // k x d
  Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > kRankTol * sv[0]) ++r;
  return svd.matrixV().rightCols(d - r);
}

SubspaceKind classify_subspace(const SkewForm& omega, const Mat& Y) {
  const int d = omega.dim();
  if (Y.rows() != d) throw InputError("classify_subspace: Y has wrong row count");
  if (numeric_rank(omega.mat()) < d) throw RankError("classify_subspace: form is degenerate");
  const int k = static_cast<int>(Y.cols());
  if (k == 0) throw InputError("classify_subspace: Y is empty");
  if (numeric_rank(Y) < k) throw InputError("classify_subspace: Y columns are dependent");

  // orthonormalize so the verdict depends only on the subspace
  Eigen::HouseholderQR<Mat> qr(Y);
  Mat q = qr.householderQ() * Mat::Identity(d, k);
  Mat r = q.transpose() * omega.mat() * q;

  if (r.cwiseAbs().maxCoeff() <= 1e-10) {
    return (2 * k == d) ? SubspaceKind::lagrangian : SubspaceKind::isotropic;
  }
  Eigen::JacobiSVD<Mat> svd(r);
  const auto& sv = svd.singularValues();
  if (sv[sv.size() - 1] > kRankTol * std::max(1.0, sv[0])) return SubspaceKind::symplectic;
  return SubspaceKind::generic;
}

const char* to_string(SubspaceKind k) {
  switch (k) {
    case SubspaceKind::isotropic: return "isotropic";
    case SubspaceKind::lagrangian: return "lagrangian";
    case SubspaceKind::symplectic: return "symplectic";
    default: return "generic";
  }
}

}  // namespace mech
