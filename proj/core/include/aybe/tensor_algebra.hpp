#pragma once

// Mat_n(C), its clock-and-shift basis, and the tensor powers in which
// r-matrices live.
//
// Storage: a TwoTensor sum_{abcd} t_{abcd} E_ab (x) E_cd is kept as its
// Kronecker operator, an n^2 x n^2 matrix M with M(a*n + c, b*n + d) = t_{abcd},
// so that the leg-wise product of tensors is the matrix product of operators.
// ThreeTensor likewise uses row (a*n + c)*n + e, column (b*n + d)*n + f.
//
// LinearEndo acts on column-major vectorized matrices: vec(Z)[i + n*j] = Z(i, j).

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "aybe/special_functions.hpp"

namespace aybe {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
/// Element of Mat_n(C).
using SquareMatrix = Eigen::MatrixXcd;

/// Largest supported matrix size.
inline constexpr int kMaxDimension = 16;

/// Clock-and-shift pair: X = diag(1, eps, ..., eps^{n-1}), Y the cyclic shift
/// with Y(i, i+1) = 1 and Y(n-1, 0) = 1, eps = exp(2 pi i d / n).
/// With this Y, X Y = eps^{-1} Y X.
struct HeisenbergPair {
  int n = 0;
  int d = 0;
  Complex eps;
  SquareMatrix X;
  SquareMatrix Y;
};

/// Throws ParameterError unless 0 < d < n, gcd(n, d) = 1 and n <= kMaxDimension.
HeisenbergPair heisenberg_pair(int n, int d);

/// Z_(k,l) = Y^k X^{-l}, (k, l) in {1..n}^2.
SquareMatrix z_basis(const HeisenbergPair& pair, int k, int l);
/// Z^v_(k,l) = (1/n) X^l Y^{-k}; tr(Z^v_(k,l) Z_(k',l')) = delta.
SquareMatrix z_dual(const HeisenbergPair& pair, int k, int l);

/// Position of (k, l) in {1..n}^2 flattened row-major: (k-1)*n + (l-1).
inline int basis_index(int n, int k, int l) { return (k - 1) * n + (l - 1); }

/// T Z T^{-1}. Throws NumericError if T is singular.
SquareMatrix ad(const SquareMatrix& T, const SquareMatrix& Z);

/// tr(A B).
Complex trace_pairing(const SquareMatrix& A, const SquareMatrix& B);

/// n^2 x n^2 matrix whose (k,l) column is vec(Z_(k,l)).
CMatrix z_change_of_basis(const HeisenbergPair& pair);

/// Ratio of extreme singular values (infinity for a singular matrix).
double condition_number(const CMatrix& m);

CVector vec(const SquareMatrix& m);
SquareMatrix unvec(const CVector& v, int n);

class TwoTensor {
public:
  TwoTensor() = default;
  /// Zero tensor.
  explicit TwoTensor(int n);

  static TwoTensor identity(int n);
  /// a (x) b.
  static TwoTensor simple(const SquareMatrix& a, const SquareMatrix& b);
  static TwoTensor from_operator(CMatrix op);
  /// Entries in row-major (a, b, c, d) order.
  static TwoTensor from_flat(int n, std::span<const Complex> entries);

  int n() const noexcept { return n_; }
  /// Coefficient of E_ab (x) E_cd.
  Complex operator()(int a, int b, int c, int d) const { return op_(a * n_ + c, b * n_ + d); }
  Complex& operator()(int a, int b, int c, int d) { return op_(a * n_ + c, b * n_ + d); }

  const CMatrix& op() const noexcept { return op_; }
  std::vector<Complex> flat() const;
  /// Frobenius norm of the coefficient array.
  double norm() const { return op_.norm(); }

  TwoTensor& operator+=(const TwoTensor& other);
  TwoTensor& operator-=(const TwoTensor& other);
  TwoTensor& operator*=(Complex s);
  friend TwoTensor operator+(TwoTensor a, const TwoTensor& b) { return a += b; }
  friend TwoTensor operator-(TwoTensor a, const TwoTensor& b) { return a -= b; }
  friend TwoTensor operator*(Complex s, TwoTensor a) { return a *= s; }
  friend TwoTensor operator-(TwoTensor a) { return a *= Complex{-1.0, 0.0}; }
  friend bool operator==(const TwoTensor& a, const TwoTensor& b) {
    return a.n_ == b.n_ && a.op_ == b.op_;
  }

private:
  int n_ = 0;
  CMatrix op_;
};

class ThreeTensor {
public:
  ThreeTensor() = default;
  explicit ThreeTensor(int n);

  static ThreeTensor identity(int n);
  static ThreeTensor simple(const SquareMatrix& a, const SquareMatrix& b, const SquareMatrix& c);
  static ThreeTensor from_operator(CMatrix op);

  int n() const noexcept { return n_; }
  /// Coefficient of E_ab (x) E_cd (x) E_ef.
  Complex operator()(int a, int b, int c, int d, int e, int f) const {
    return op_((a * n_ + c) * n_ + e, (b * n_ + d) * n_ + f);
  }
  const CMatrix& op() const noexcept { return op_; }
  double norm() const { return op_.norm(); }

  ThreeTensor& operator+=(const ThreeTensor& other);
  ThreeTensor& operator-=(const ThreeTensor& other);
  friend ThreeTensor operator+(ThreeTensor a, const ThreeTensor& b) { return a += b; }
  friend ThreeTensor operator-(ThreeTensor a, const ThreeTensor& b) { return a -= b; }

private:
  int n_ = 0;
  CMatrix op_;
};

/// End_C(Mat_n(C)) acting on column-major vectorizations.
struct LinearEndo {
  int n = 0;
  CMatrix matrix;

  SquareMatrix apply(const SquareMatrix& z) const { return unvec(matrix * vec(z), n); }
};

/// can(Z' (x) Z'') = (Z -> tr(Z' Z) Z''), extended linearly.
LinearEndo can(const TwoTensor& t);
/// Inverse of can.
TwoTensor can_inv(const LinearEndo& endo);

enum class Slots { s12, s13, s23 };

/// x (x) y  ->  x (x) y (x) 1, x (x) 1 (x) y, or 1 (x) x (x) y.
ThreeTensor embed(const TwoTensor& t, Slots slots);

/// Leg-wise products: (a (x) b)(a' (x) b') = aa' (x) bb'.
TwoTensor two_mul(const TwoTensor& s, const TwoTensor& t);
ThreeTensor three_mul(const ThreeTensor& s, const ThreeTensor& t);
ThreeTensor commutator(const ThreeTensor& s, const ThreeTensor& t);

/// t^{21}: the coefficient of E_ab (x) E_cd moves to E_cd (x) E_ab.
TwoTensor swap_legs(const TwoTensor& t);
/// Matrix transpose applied on both legs: a (x) b -> a^T (x) b^T.
TwoTensor transpose_legs(const TwoTensor& t);
/// (pi (x) pi)(t) with pi(Z) = Z - (1/n) tr(Z) I.
TwoTensor sl_project(const TwoTensor& t);

/// Trace over leg 1 or leg 2 (1-based).
SquareMatrix partial_trace(const TwoTensor& t, int leg);
/// Trace over leg 1, 2 or 3 (1-based); the remaining legs keep their order.
TwoTensor partial_trace(const ThreeTensor& t, int leg);

}  // namespace aybe
