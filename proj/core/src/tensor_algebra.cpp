#include "aybe/tensor_algebra.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <limits>
#include <numeric>
#include <sstream>

#include "aybe/errors.hpp"

namespace aybe {
namespace {

// exp(2 pi i p / n) with p reduced mod n first, so eps^n is exactly 1.
Complex root_of_unity(int n, long p) {
  const long r = ((p % n) + n) % n;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / static_cast<double>(n));
}

void require_index(const HeisenbergPair& pair, int k, int l) {
  if (k < 1 || k > pair.n || l < 1 || l > pair.n) {
    std::ostringstream os;
    os << "basis index (" << k << ", " << l << ") outside {1.." << pair.n << "}^2";
    throw ParameterError(os.str());
  }
}

void require_same_n(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ParameterError(os.str());
  }
}

int dimension_from_operator(const CMatrix& op, int legs) {
  if (op.rows() != op.cols()) {
    throw ParameterError("tensor operator must be square");
  }
  const auto size = static_cast<int>(op.rows());
  int n = 1;
  while (true) {
    int p = 1;
    for (int i = 0; i < legs; ++i) p *= n;
    if (p == size) return n;
    if (p > size) break;
    ++n;
  }
  std::ostringstream os;
  os << "operator of size " << size << " is not an n^" << legs << " square";
  throw ParameterError(os.str());
}

}  // namespace

HeisenbergPair heisenberg_pair(int n, int d) {
  if (n < 2 || n > kMaxDimension || d <= 0 || d >= n || std::gcd(n, d) != 1) {
    std::ostringstream os;
    os << "need 0 < d < n <= " << kMaxDimension << " with gcd(n, d) = 1, got (n, d) = (" << n
       << ", " << d << ")";
    throw ParameterError(os.str());
  }
  HeisenbergPair pair;
  pair.n = n;
  pair.d = d;
  pair.eps = root_of_unity(n, d);
  pair.X = SquareMatrix::Zero(n, n);
  pair.Y = SquareMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    pair.X(j, j) = root_of_unity(n, static_cast<long>(d) * j);
    pair.Y(j, (j + 1) % n) = 1.0;
  }
  return pair;
}

SquareMatrix z_basis(const HeisenbergPair& pair, int k, int l) {
  require_index(pair, k, l);
  const int n = pair.n;
  SquareMatrix z = SquareMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + k) % n;
    z(i, j) = root_of_unity(n, -static_cast<long>(pair.d) * l * j);
  }
  return z;
}

SquareMatrix z_dual(const HeisenbergPair& pair, int k, int l) {
  require_index(pair, k, l);
  const int n = pair.n;
  SquareMatrix z = SquareMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = ((i - k) % n + n) % n;
    z(i, j) = root_of_unity(n, static_cast<long>(pair.d) * l * i) / static_cast<double>(n);
  }
  return z;
}

SquareMatrix ad(const SquareMatrix& T, const SquareMatrix& Z) {
  require_same_n(static_cast<int>(T.rows()), static_cast<int>(Z.rows()), "ad");
  Eigen::FullPivLU<CMatrix> lu(T);
  if (!lu.isInvertible()) {
    throw NumericError("ad: conjugating matrix is singular");
  }
  return T * Z * lu.inverse();
}

Complex trace_pairing(const SquareMatrix& A, const SquareMatrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols()) {
    throw ParameterError("trace_pairing: matrices must be square");
  }
  require_same_n(static_cast<int>(A.rows()), static_cast<int>(B.rows()), "trace_pairing");
  // tr(AB) = sum_ij A_ij B_ji without forming the product.
  return (A.array() * B.transpose().array()).sum();
}

CMatrix z_change_of_basis(const HeisenbergPair& pair) {
  const int n = pair.n;
  CMatrix basis(n * n, n * n);
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= n; ++l) {
      basis.col(basis_index(n, k, l)) = vec(z_basis(pair, k, l));
    }
  }
  return basis;
}

double condition_number(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0.0;
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

CVector vec(const SquareMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

SquareMatrix unvec(const CVector& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) {
    throw ParameterError("unvec: vector length is not n^2");
  }
  return Eigen::Map<const CMatrix>(v.data(), n, n);
}

// ---------------------------------------------------------------------------
// TwoTensor

TwoTensor::TwoTensor(int n) : n_(n), op_(CMatrix::Zero(n * n, n * n)) {
  if (n < 1) throw ParameterError("TwoTensor: n must be positive");
}

TwoTensor TwoTensor::identity(int n) {
  TwoTensor t(n);
  t.op_.setIdentity();
  return t;
}

TwoTensor TwoTensor::simple(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_n(static_cast<int>(a.rows()), static_cast<int>(b.rows()), "TwoTensor::simple");
  return from_operator(Eigen::kroneckerProduct(a, b).eval());
}

TwoTensor TwoTensor::from_operator(CMatrix op) {
  TwoTensor t;
  t.n_ = dimension_from_operator(op, 2);
  t.op_ = std::move(op);
  return t;
}

TwoTensor TwoTensor::from_flat(int n, std::span<const Complex> entries) {
  const std::size_t expected = static_cast<std::size_t>(n) * n * n * n;
  if (entries.size() != expected) {
    std::ostringstream os;
    os << "TwoTensor::from_flat: expected " << expected << " entries, got " << entries.size();
    throw ParameterError(os.str());
  }
  TwoTensor t(n);
  std::size_t idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) t(a, b, c, d) = entries[idx++];
  return t;
}

std::vector<Complex> TwoTensor::flat() const {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(op_.size()));
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c)
        for (int d = 0; d < n_; ++d) out.push_back((*this)(a, b, c, d));
  return out;
}

TwoTensor& TwoTensor::operator+=(const TwoTensor& other) {
  require_same_n(n_, other.n_, "TwoTensor +");
  op_ += other.op_;
  return *this;
}

TwoTensor& TwoTensor::operator-=(const TwoTensor& other) {
  require_same_n(n_, other.n_, "TwoTensor -");
  op_ -= other.op_;
  return *this;
}

TwoTensor& TwoTensor::operator*=(Complex s) {
  op_ *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// ThreeTensor

ThreeTensor::ThreeTensor(int n) : n_(n), op_(CMatrix::Zero(n * n * n, n * n * n)) {
  if (n < 1) throw ParameterError("ThreeTensor: n must be positive");
}

ThreeTensor ThreeTensor::identity(int n) {
  ThreeTensor t(n);
  t.op_.setIdentity();
  return t;
}

ThreeTensor ThreeTensor::simple(const SquareMatrix& a, const SquareMatrix& b,
                                const SquareMatrix& c) {
  require_same_n(static_cast<int>(a.rows()), static_cast<int>(b.rows()), "ThreeTensor::simple");
  require_same_n(static_cast<int>(a.rows()), static_cast<int>(c.rows()), "ThreeTensor::simple");
  return from_operator(Eigen::kroneckerProduct(Eigen::kroneckerProduct(a, b).eval(), c).eval());
}

ThreeTensor ThreeTensor::from_operator(CMatrix op) {
  ThreeTensor t;
  t.n_ = dimension_from_operator(op, 3);
  t.op_ = std::move(op);
  return t;
}

ThreeTensor& ThreeTensor::operator+=(const ThreeTensor& other) {
  require_same_n(n_, other.n_, "ThreeTensor +");
  op_ += other.op_;
  return *this;
}

ThreeTensor& ThreeTensor::operator-=(const ThreeTensor& other) {
  require_same_n(n_, other.n_, "ThreeTensor -");
  op_ -= other.op_;
  return *this;
}

// ---------------------------------------------------------------------------
// Trace duality

LinearEndo can(const TwoTensor& t) {
  // Z -> sum t_abcd tr(E_ab Z) E_cd = sum t_abcd Z_ba E_cd.
  const int n = t.n();
  LinearEndo endo{n, CMatrix::Zero(n * n, n * n)};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) endo.matrix(c + n * d, b + n * a) = t(a, b, c, d);
  return endo;
}

TwoTensor can_inv(const LinearEndo& endo) {
  const int n = endo.n;
  if (endo.matrix.rows() != n * n || endo.matrix.cols() != n * n) {
    throw ParameterError("can_inv: endomorphism matrix must be n^2 x n^2");
  }
  TwoTensor t(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) t(a, b, c, d) = endo.matrix(c + n * d, b + n * a);
  return t;
}

// ---------------------------------------------------------------------------
// Leg operations

ThreeTensor embed(const TwoTensor& t, Slots slots) {
  const int n = t.n();
  const CMatrix eye = CMatrix::Identity(n, n);
  switch (slots) {
    case Slots::s12:
      return ThreeTensor::from_operator(Eigen::kroneckerProduct(t.op(), eye).eval());
    case Slots::s23:
      return ThreeTensor::from_operator(Eigen::kroneckerProduct(eye, t.op()).eval());
    case Slots::s13: {
      CMatrix op = CMatrix::Zero(n * n * n, n * n * n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
              const Complex v = t(a, b, c, d);
              if (v == Complex{}) continue;
              for (int e = 0; e < n; ++e) op((a * n + e) * n + c, (b * n + e) * n + d) = v;
            }
      return ThreeTensor::from_operator(std::move(op));
    }
  }
  throw ParameterError("embed: invalid slot tag");
}

TwoTensor two_mul(const TwoTensor& s, const TwoTensor& t) {
  require_same_n(s.n(), t.n(), "two_mul");
  return TwoTensor::from_operator(s.op() * t.op());
}

ThreeTensor three_mul(const ThreeTensor& s, const ThreeTensor& t) {
  require_same_n(s.n(), t.n(), "three_mul");
  return ThreeTensor::from_operator(s.op() * t.op());
}

ThreeTensor commutator(const ThreeTensor& s, const ThreeTensor& t) {
  require_same_n(s.n(), t.n(), "commutator");
  return ThreeTensor::from_operator(s.op() * t.op() - t.op() * s.op());
}

TwoTensor swap_legs(const TwoTensor& t) {
  const int n = t.n();
  TwoTensor out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) out(c, d, a, b) = t(a, b, c, d);
  return out;
}

TwoTensor transpose_legs(const TwoTensor& t) {
  const int n = t.n();
  TwoTensor out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) out(b, a, d, c) = t(a, b, c, d);
  return out;
}

TwoTensor sl_project(const TwoTensor& t) {
  // pi (x) pi = (1 - P) (x) (1 - P) with P(Z) = tr(Z) I / n; expand leg by leg.
  const int n = t.n();
  const double inv_n = 1.0 / static_cast<double>(n);
  const SquareMatrix tr1 = partial_trace(t, 1);
  const SquareMatrix tr2 = partial_trace(t, 2);
  Complex full{0.0, 0.0};
  for (int a = 0; a < n; ++a) full += tr2(a, a);

  TwoTensor out = t;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Complex v{0.0, 0.0};
          if (a == b) v -= inv_n * tr1(c, d);
          if (c == d) v -= inv_n * tr2(a, b);
          if (a == b && c == d) v += inv_n * inv_n * full;
          out(a, b, c, d) += v;
        }
  return out;
}

SquareMatrix partial_trace(const TwoTensor& t, int leg) {
  if (leg != 1 && leg != 2) throw ParameterError("partial_trace: leg must be 1 or 2");
  const int n = t.n();
  SquareMatrix out = SquareMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out(a, b) += (leg == 1) ? t(i, i, a, b) : t(a, b, i, i);
  return out;
}

TwoTensor partial_trace(const ThreeTensor& t, int leg) {
  if (leg < 1 || leg > 3) throw ParameterError("partial_trace: leg must be 1, 2 or 3");
  const int n = t.n();
  TwoTensor out(n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            Complex v;
            if (leg == 1) v = t(i, i, a, b, c, d);
            else if (leg == 2) v = t(a, b, i, i, c, d);
            else v = t(a, b, c, d, i, i);
            out(a, b, c, d) += v;
          }
  return out;
}

}  // namespace aybe
