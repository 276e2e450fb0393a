#include <gtest/gtest.h>

#include <cmath>

#include "aybe/errors.hpp"
#include "aybe/special_functions.hpp"
#include "ld_oracle.hpp"
#include "test_support.hpp"

namespace aybe {
namespace {

using test::Rng;
using test::rel_err;

const Complex kTauI{0.0, 1.0};

double scale_of(Complex a, Complex b) { return std::max({std::abs(a), std::abs(b), 1.0}); }

TEST(Nome, Examples) {
  EXPECT_NEAR(nome(kTauI).real(), 0.0432139182638, 1e-13);
  EXPECT_EQ(nome(kTauI).imag(), 0.0);
  const Complex q = nome({0.5, 2.0});
  EXPECT_NEAR(q.imag(), std::exp(-2.0 * kPi), 1e-17);
  EXPECT_NEAR(q.real(), 0.0, 1e-17);
  EXPECT_THROW(nome({0.0, -1.0}), ParameterError);
  EXPECT_THROW(ModularParameter({0.3, 0.0}), ParameterError);
}

TEST(ReduceArgument, Examples) {
  ReducedArgument r = reduce_argument(0.1, kTauI, ThetaKind::theta3);
  EXPECT_NEAR(std::abs(r.z0 - 0.1), 0.0, 1e-15);
  EXPECT_EQ(r.m, 0);
  EXPECT_EQ(r.k, 0);
  EXPECT_NEAR(std::abs(r.multiplier - 1.0), 0.0, 1e-15);

  r = reduce_argument(1.1, kTauI, ThetaKind::theta3);
  EXPECT_NEAR(std::abs(r.z0 - 0.1), 0.0, 1e-15);
  EXPECT_EQ(r.m, 1);
  EXPECT_EQ(r.k, 0);
  EXPECT_NEAR(std::abs(r.multiplier - 1.0), 0.0, 1e-15);

  // theta1(z0 + tau) = -exp(-pi i tau - 2 pi i z0) theta1(z0)
  r = reduce_argument({0.1, 1.0}, kTauI, ThetaKind::theta1);
  EXPECT_EQ(r.k, 1);
  EXPECT_EQ(r.m, 0);
  const Complex expected = -std::exp(-kI * kPi * kTauI - 2.0 * kI * kPi * 0.1);
  EXPECT_LT(rel_err(r.multiplier, expected), 1e-14);
  EXPECT_LT(rel_err(std::exp(r.log_multiplier), r.multiplier), 1e-14);
}

TEST(ReduceArgument, StripBounds) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Complex tau = rng.in_box(-0.5, 0.5, 0.4, 2.0);
    const Complex z = rng.in_box(-6, 6, -5, 5);
    for (ThetaKind kind : {ThetaKind::theta1, ThetaKind::theta3}) {
      const ReducedArgument r = reduce_argument(z, tau, kind);
      EXPECT_LE(std::abs(r.z0.real()), 0.5 + 1e-12);
      EXPECT_LE(std::abs(r.z0.imag()), tau.imag() / 2 + 1e-12);
      EXPECT_LT(std::abs(r.z0 + static_cast<double>(r.m) + static_cast<double>(r.k) * tau - z), 1e-12);
    }
  }
}

TEST(Theta, GoldenValues) {
  int checked = 0;
  for (const char* name : {"theta1", "theta3", "theta1_deriv_zero", "theta3_deriv_half_period",
                           "theta_shifted", "theta1_multiplier", "theta3_multiplier", "nome"}) {
    for (const GoldenRecord& rec : select(test::golden(), name)) {
      EXPECT_LT(golden_error(evaluate_record(rec), rec.value), 1e-13)
          << name << " line " << rec.line;
      ++checked;
    }
  }
  EXPECT_GE(checked, 20);
}

TEST(Theta, Theta1Examples) {
  EXPECT_EQ(theta1(0.0, kTauI), Complex(0.0, 0.0));
  EXPECT_EQ(theta1(-0.3, kTauI), -theta1(0.3, kTauI));
}

TEST(Theta, Theta3AtZeroClassicalValue) {
  const double expected = std::pow(kPi, 0.25) / std::tgamma(0.75);
  EXPECT_NEAR(theta3(0.0, kTauI).real(), 1.08643481121330801, 1e-15);
  EXPECT_LT(std::abs(theta3(0.0, kTauI) - expected) / expected, 1e-12);
}

TEST(Theta, Theta3PeriodAndParity) {
  const Complex z{0.2, 0.1};
  const Complex tau{0.0, 0.8};
  EXPECT_LT(rel_err(theta3(z + 1.0, tau), theta3(z, tau)), 1e-14);
  EXPECT_EQ(theta3(-z, tau), theta3(z, tau));
}

TEST(Theta, DerivativeProductFormula) {
  for (Complex tau : {kTauI, Complex{0.3, 0.9}, Complex{-0.2, 1.4}}) {
    // theta2(0) = theta1(1/2), theta4(0) = theta3(1/2)
    const Complex product = kPi * theta1(0.5, tau) * theta3(0.0, tau) * theta3(0.5, tau);
    EXPECT_LT(rel_err(theta1_deriv_zero(tau), product), 1e-10) << tau;
  }
}

TEST(Theta, HalfPeriodDerivativeIdentity) {
  const Complex tau{0.3, 0.9};
  const Complex lhs = theta3_deriv_half_period(tau);
  const Complex rhs = kI * std::exp(-kI * kPi * tau / 4.0) * theta1_deriv_zero(tau);
  EXPECT_LT(rel_err(lhs, rhs), 1e-14);
  // independent check: central difference of theta3 itself
  const Complex c = (1.0 + tau) / 2.0;
  const double h = 1e-5;
  const Complex fd = (theta3(c + h, tau) - theta3(c - h, tau)) / (2.0 * h);
  EXPECT_LT(rel_err(lhs, fd), 1e-8);
}

TEST(Theta, DerivativeFiniteForLargeImTau) {
  const Complex v = theta1_deriv_zero({0.0, 2.0});
  EXPECT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
  EXPECT_GT(std::abs(v), 0.1);
}

TEST(ThetaShifted, Examples) {
  const Complex x = 0.2;
  EXPECT_LT(std::abs(theta_shifted(x, x, kTauI)), 1e-15);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Complex w = rng.in_box(-1, 1, -0.5, 0.5);
    EXPECT_LT(rel_err(theta_shifted(0.0, w, kTauI), theta3(w + (1.0 + kTauI) / 2.0, kTauI)), 1e-14);
  }
}

// --- properties over random points ----------------------------------------

TEST(ThetaProperties, QuasiPeriodicity) {
  Rng rng(101);
  for (int i = 0; i < 100; ++i) {
    const Complex tau = rng.in_box(-0.5, 0.5, 0.5, 2.0);
    const Complex z = rng.in_box(-1, 1, -1, 1);
    const Complex q = nome(tau);
    const Complex e = std::exp(-2.0 * kI * kPi * z);
    const Complex t1 = theta1(z, tau);
    const Complex t3 = theta3(z, tau);

    EXPECT_LT(std::abs(theta1(z + 1.0, tau) + t1), 1e-12 * scale_of(t1, t1));
    EXPECT_LT(std::abs(theta3(z + 1.0, tau) - t3), 1e-12 * scale_of(t3, t3));

    const Complex t1_tau = theta1(z + tau, tau);
    const Complex t3_tau = theta3(z + tau, tau);
    EXPECT_LT(std::abs(t1_tau + e / q * t1), 1e-12 * scale_of(t1_tau, t1));
    EXPECT_LT(std::abs(t3_tau - e / q * t3), 1e-12 * scale_of(t3_tau, t3));
  }
}

TEST(ThetaProperties, Parity) {
  Rng rng(102);
  for (int i = 0; i < 100; ++i) {
    const Complex tau = rng.in_box(-0.5, 0.5, 0.5, 2.0);
    const Complex z = rng.in_box(-1, 1, -1, 1);
    const Complex t1 = theta1(z, tau);
    const Complex t3 = theta3(z, tau);
    EXPECT_LT(std::abs(theta1(-z, tau) + t1), 1e-14 * scale_of(t1, t1));
    EXPECT_LT(std::abs(theta3(-z, tau) - t3), 1e-14 * scale_of(t3, t3));
  }
}

TEST(ThetaProperties, ZerosOfTheta1) {
  Rng rng(103);
  for (int i = 0; i < 20; ++i) {
    const Complex tau = rng.in_box(-0.5, 0.5, 0.5, 2.0);
    const double scale = std::abs(theta1_deriv_zero(tau));
    for (int m = -1; m <= 1; ++m)
      for (int k = -1; k <= 1; ++k) {
        const Complex lattice = static_cast<double>(m) + static_cast<double>(k) * tau;
        EXPECT_LT(std::abs(theta1(lattice, tau)), 1e-10 * scale) << m << "," << k;
      }
  }
}

TEST(ThetaProperties, ReductionMatchesRawSeries) {
  Rng rng(104);
  for (int i = 0; i < 100; ++i) {
    const Complex tau = rng.in_box(-0.5, 0.5, 0.5, 2.0);
    const Complex z = rng.in_box(-2, 2, -1.5 * tau.imag(), 1.5 * tau.imag());
    EXPECT_LT(rel_err(theta1(z, tau), theta1_series(z, tau)), 1e-10);
    EXPECT_LT(rel_err(theta3(z, tau), theta3_series(z, tau)), 1e-10);
  }
}

TEST(ThetaProperties, MatchesLongDoubleOracle) {
  Rng rng(105);
  for (int i = 0; i < 100; ++i) {
    const Complex tau = rng.in_box(-0.5, 0.5, 0.5, 2.0);
    const Complex z = rng.in_box(-0.5, 0.5, -tau.imag(), tau.imag());
    EXPECT_LT(rel_err(theta1(z, tau), test::ld::to_double(test::ld::theta1(z, tau))), 1e-12);
    EXPECT_LT(rel_err(theta3(z, tau), test::ld::to_double(test::ld::theta3(z, tau))), 1e-12);
  }
}

TEST(PrecisionPolicy, Validation) {
  EXPECT_THROW((PrecisionPolicy{0.0, 64}.validate()), ParameterError);
  EXPECT_THROW((PrecisionPolicy{1e-17, 4}.validate()), ParameterError);
  EXPECT_NO_THROW((PrecisionPolicy{1e-17, 8}.validate()));
  // tiny budget: the raw series at large Im z cannot converge
  EXPECT_THROW(theta3_series({0.1, 3.0}, {0.0, 0.5}, PrecisionPolicy{1e-17, 8}), PrecisionError);
}

// --- Kronecker sigma ---------------------------------------------------------

TEST(Sigma, Examples) {
  EXPECT_LT(rel_err(kronecker_sigma({0.2, 0.1}, 0.35, kTauI), kronecker_sigma(0.35, {0.2, 0.1}, kTauI)),
            1e-14);

  const Complex u{0.2, 0.1};
  const Complex z = 1e-4;
  EXPECT_LT(std::abs(z * kronecker_sigma(u, z, kTauI) - 1.0), 1e-3);

  const Complex tau{0.0, 0.8};
  EXPECT_LT(rel_err(kronecker_sigma(0.2 + tau, 0.3, tau),
                    std::exp(-2.0 * kI * kPi * 0.3) * kronecker_sigma(0.2, 0.3, tau)),
            1e-12);
}

TEST(Sigma, ShiftByMultiplesOfTau) {
  const Complex tau{0.0, 0.8};
  const Complex u{0.2, 0.05};
  const Complex z{0.3, -0.1};
  for (int d : {1, 2}) {
    const Complex lhs = kronecker_sigma(u - static_cast<double>(d) * tau, z, tau);
    const Complex rhs = std::exp(2.0 * kI * kPi * static_cast<double>(d) * z) * kronecker_sigma(u, z, tau);
    EXPECT_LT(rel_err(lhs, rhs), 1e-10) << "d = " << d;
  }
}

TEST(Sigma, GoldenValues) {
  const auto records = select(test::golden(), "sigma");
  ASSERT_FALSE(records.empty());
  for (const GoldenRecord& rec : records) {
    EXPECT_LT(golden_error(evaluate_record(rec), rec.value), 1e-13) << "line " << rec.line;
  }
}

TEST(Sigma, PoleErrors) {
  const Complex tau{0.0, 0.8};
  EXPECT_THROW(kronecker_sigma(0.2, 0.0, tau), PoleError);
  EXPECT_THROW(kronecker_sigma(1.0 + tau + 1e-8, 0.3, tau), PoleError);
  try {
    kronecker_sigma(0.2, 2.0 - tau + Complex{1e-9, 0.0}, tau);
    FAIL() << "expected PoleError";
  } catch (const PoleError& e) {
    EXPECT_LT(std::abs(e.lattice_point() - (2.0 - tau)), 1e-12);
    EXPECT_LT(e.distance(), 1e-6);
  }
  // the threshold is tight: just outside it evaluation succeeds
  EXPECT_NO_THROW(kronecker_sigma(0.2, 1e-5, tau));
}

TEST(SigmaProperties, Laws) {
  Rng rng(201);
  int used = 0;
  while (used < 100) {
    const Complex tau = rng.in_box(-0.5, 0.5, 0.6, 1.5);
    const Complex u = rng.in_box(-0.5, 0.5, -0.4, 0.4);
    const Complex z = rng.in_box(-0.5, 0.5, -0.4, 0.4);
    if (nearest_lattice_point(u, tau).distance < 0.05 || nearest_lattice_point(z, tau).distance < 0.05 ||
        nearest_lattice_point(u + z, tau).distance < 0.05) {
      continue;
    }
    ++used;
    const Complex s = kronecker_sigma(u, z, tau);
    EXPECT_LT(rel_err(kronecker_sigma(z, u, tau), s), 1e-8);
    EXPECT_LT(rel_err(kronecker_sigma(u + 1.0, z, tau), s), 1e-8);
    EXPECT_LT(rel_err(kronecker_sigma(u + tau, z, tau), std::exp(-2.0 * kI * kPi * z) * s), 1e-8);
    EXPECT_LT(rel_err(kronecker_sigma(u, z + tau, tau), std::exp(-2.0 * kI * kPi * u) * s), 1e-8);
    EXPECT_LT(rel_err(s, test::ld::to_double(test::ld::sigma(u, z, tau))), 1e-10);
  }
}

TEST(SigmaProperties, ResidueAtZero) {
  Rng rng(202);
  for (int i = 0; i < 100; ++i) {
    const Complex tau = rng.in_box(-0.5, 0.5, 0.6, 1.5);
    const Complex u = rng.in_box(0.1, 0.4, 0.1, 0.25);
    const Complex z = 1e-5 * std::exp(kI * rng.uniform(0, 2 * kPi));
    // z sigma(u, z) = 1 + O(z)
    EXPECT_LT(std::abs(z * kronecker_sigma(u, z, tau) - 1.0), 1e-3);
    const Complex even = 0.5 * (z * kronecker_sigma(u, z, tau) - z * kronecker_sigma(u, -z, tau));
    EXPECT_LT(std::abs(even - 1.0), 1e-8);
  }
}

TEST(SigmaProperties, FourierSeriesCrossCheck) {
  Rng rng(203);
  for (int i = 0; i < 50; ++i) {
    const Complex tau = rng.in_box(-0.3, 0.3, 0.7, 1.3);
    const Complex u = rng.in_box(-0.4, 0.4, 0.1, 0.5);
    const Complex z = rng.in_box(-0.5, 0.5, 0.25 * tau.imag(), 0.75 * tau.imag());
    EXPECT_LT(rel_err(kronecker_sigma_series(u, z, tau), kronecker_sigma(u, z, tau)), 1e-10);
  }
}

// Variant with a - 2 pi i n tau in the denominator exponent. Its terms don't
// decay for real z, so it is not sigma.
TEST(SigmaProperties, MisplacedPiSeriesDisagrees) {
  const Complex tau = kTauI;
  const Complex a{0.21, 0.13};
  const Complex z = 0.3;
  Complex partial{0.0, 0.0};
  for (int n = -50; n <= 50; ++n) {
    const double nn = static_cast<double>(n);
    partial += std::exp(-2.0 * kI * kPi * nn * z) /
               (1.0 - std::exp(-2.0 * kI * kPi * (a - 2.0 * kI * kPi * nn * tau)));
  }
  partial *= 2.0 * kI * kPi;
  EXPECT_GT(rel_err(partial, kronecker_sigma(a, z, tau)), 1e-2);
}

}  // namespace
}  // namespace aybe
