#pragma once

#include "mech/calc.hpp"

namespace mech {

// Skew-symmetric bilinear form on R^dim.  The stored matrix is exactly
// antisymmetric; construction rejects inputs that are not antisymmetric
// within 1e-12 before antisymmetrizing.
class SkewForm {
 public:
  explicit SkewForm(Mat m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Mat& mat() const { return mat_; }
  double operator()(const Vec& u, const Vec& v) const { return u.dot(mat_ * v); }

 private:
  Mat mat_;
};

// Basis realizing the standard form: k kernel vectors u_i, then n pairs
// (e_i, f_i) pairing to the identity.  Columns of u/e/f are the vectors.
struct SymplecticBasis {
  Mat u;  // dim x k
  Mat e;  // dim x n
  Mat f;  // dim x n

  int k() const { return static_cast<int>(u.cols()); }
  int n() const { return static_cast<int>(e.cols()); }
  Mat basis_matrix() const;  // [u e f]
  // the target block form [[0,0,0],[0,0,I],[0,-I,0]] for this (k, n)
  Mat block_form() const;
};

// Constructive standard form: extract the kernel, then repeatedly pick a
// pair with unit pairing and pass to the complement of its span.
SymplecticBasis standard_form(const SkewForm& omega);

// Basis (columns) of { v : omega(v, u) = 0 for all u in span(Y) }.
// Requires omega nondegenerate and Y (columns) independent.
Mat symplectic_complement(const SkewForm& omega, const Mat& Y);

enum class SubspaceKind { isotropic, lagrangian, symplectic, generic };

SubspaceKind classify_subspace(const SkewForm& omega, const Mat& Y);

const char* to_string(SubspaceKind k);

// rank with the relative singular-value threshold used throughout this module
int numeric_rank(const Mat& m, double rel_tol = 1e-10);

}  // namespace mech
