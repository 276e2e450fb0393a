#pragma once

#include <gtest/gtest.h>

#include <complex>
#include <random>
#include <string>
#include <vector>

#include "aybe/fixtures.hpp"
#include "aybe/tensor_algebra.hpp"

namespace aybe::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(AYBE_FIXTURES_DIR) + "/" + name;
}

inline const std::vector<GoldenRecord>& golden() {
  static const std::vector<GoldenRecord> records = load_golden(fixture_path("golden_values.txt"));
  return records;
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::abs(want);
}

inline double rel_err(const CMatrix& got, const CMatrix& want) {
  return (got - want).norm() / want.norm();
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::complex<double> in_box(double re_lo, double re_hi, double im_lo, double im_hi) {
    const double re = uniform(re_lo, re_hi);
    const double im = uniform(im_lo, im_hi);
    return {re, im};
  }
  CMatrix matrix(int rows, int cols) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = in_box(-1, 1, -1, 1);
    return m;
  }
  TwoTensor two_tensor(int n) { return TwoTensor::from_operator(matrix(n * n, n * n)); }
  ThreeTensor three_tensor(int n) {
    return ThreeTensor::from_operator(matrix(n * n * n, n * n * n));
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace aybe::test
