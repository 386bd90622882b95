#include "bvpgp/domain.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace bvpgp;

namespace {

Dataset one_point_dataset(double x, double value,
                          ObservationKind kind = ObservationKind::solution) {
  Dataset ds;
  ds.points.resize(1, 1);
  ds.points(0, 0) = x;
  ds.values.resize(1);
  ds.values[0] = value;
  ds.kinds = {kind};
  return ds;
}

TEST(ValidateDataset, AcceptsInteriorPoint) {
  EXPECT_NO_THROW(
      validate_dataset(one_point_dataset(0.5, 1.0), Domain::unit_interval()));
}

TEST(ValidateDataset, RejectsPointOutsideBox) {
  try {
    validate_dataset(one_point_dataset(1.5, 1.0), Domain::unit_interval());
    FAIL() << "expected PointOutsideDomain";
  } catch (const PointOutsideDomain& e) {
    EXPECT_EQ(e.index, 0);
  }
}

TEST(ValidateDataset, RejectsNonFiniteValue) {
  EXPECT_THROW(validate_dataset(one_point_dataset(0.5, std::nan("")),
                                Domain::unit_interval()),
               NonFiniteValue);
}

TEST(ValidateDataset, RejectsEmptyDataset) {
  Dataset ds;
  ds.points.resize(0, 1);
  ds.values.resize(0);
  EXPECT_THROW(validate_dataset(ds, Domain::unit_interval()), EmptyDataset);
}

TEST(ValidateDataset, RejectsDimensionMismatch) {
  EXPECT_THROW(
      validate_dataset(one_point_dataset(0.5, 1.0), Domain::unit_square()),
      DimMismatch);
}

// Acceptance iff every invariant holds, over small enumerated violations.
TEST(ValidateDataset, ExhaustiveSmallCases) {
  const Domain dom = Domain::unit_square();
  for (int bad_point : {0, 1}) {
    for (int bad_value : {0, 1}) {
      Dataset ds;
      ds.points.resize(2, 2);
      ds.points << 0.25, 0.75, bad_point ? 2.0 : 0.5, 0.5;
      ds.values.resize(2);
      ds.values << 1.0, bad_value ? std::numeric_limits<double>::infinity() : -1.0;
      ds.kinds = {ObservationKind::solution, ObservationKind::source};
      const bool valid = !bad_point && !bad_value;
      if (valid) {
        EXPECT_NO_THROW(validate_dataset(ds, dom));
      } else {
        EXPECT_THROW(validate_dataset(ds, dom), ValidationError);
      }
    }
  }
}

TEST(RelativeL2Error, IdentityIsZero) {
  Vector t(3);
  t << 1.0, -2.0, 3.0;
  EXPECT_DOUBLE_EQ(relative_l2_error(t, t), 0.0);
}

TEST(RelativeL2Error, DoubledPredictionIsOne) {
  Vector t(4);
  t << 0.5, 1.0, -1.0, 2.0;
  EXPECT_DOUBLE_EQ(relative_l2_error(2.0 * t, t), 1.0);
}

TEST(RelativeL2Error, HandComputedRatio) {
  Vector p(2), t(2);
  p << 1.0, 0.0;
  t << 1.0, 1.0;
  EXPECT_NEAR(relative_l2_error(p, t), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(RelativeL2Error, ErrorsOnBadInput) {
  Vector a(2), b(3);
  a.setOnes();
  b.setOnes();
  EXPECT_THROW(relative_l2_error(a, b), LengthMismatch);
  Vector z = Vector::Zero(2);
  EXPECT_THROW(relative_l2_error(a, z), ZeroReference);
}

TEST(RelativeL2Error, ScaleInvariance) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 25; ++rep) {
    Vector p(5), t(5);
    for (int i = 0; i < 5; ++i) {
      p[i] = gauss(rng);
      t[i] = gauss(rng);
    }
    const double alpha = gauss(rng);
    if (std::abs(alpha) < 1e-3 || t.norm() == 0.0) continue;
    EXPECT_NEAR(relative_l2_error(alpha * p, alpha * t),
                relative_l2_error(p, t), 1e-12);
  }
}

TEST(AddWhiteNoise, ZeroSigmaIsIdentity) {
  Vector v(3);
  v << 1.0, 2.0, 3.0;
  const Vector out = add_white_noise(v, 0.0, 42);
  EXPECT_EQ(out, v);
}

TEST(AddWhiteNoise, SameSeedSameOutput) {
  Vector v = Vector::LinSpaced(100, 0.0, 1.0);
  EXPECT_EQ(add_white_noise(v, 0.1, 9), add_white_noise(v, 0.1, 9));
}

TEST(AddWhiteNoise, SampleVarianceMatchesSigma) {
  const int n = 100000;
  const double sigma = 0.01;
  const Vector zero = Vector::Zero(n);
  const Vector noise = add_white_noise(zero, sigma, 1234);
  const double mean = noise.mean();
  const double var = (noise.array() - mean).square().sum() / (n - 1);
  EXPECT_NEAR(var, sigma * sigma, 0.05 * sigma * sigma);
}

TEST(DatasetCsv, RoundTrips1D) {
  Dataset ds;
  ds.points.resize(3, 1);
  ds.points << 0.19, 0.44, 0.62;
  ds.values.resize(3);
  ds.values << 0.1, -0.25, 1.0 / 3.0;
  ds.kinds = {ObservationKind::solution, ObservationKind::source,
              ObservationKind::solution};
  std::stringstream ss;
  write_dataset_csv(ds, ss);
  const Dataset back = read_dataset_csv(ss);
  ASSERT_EQ(back.rows(), ds.rows());
  EXPECT_EQ(back.points, ds.points);
  EXPECT_EQ(back.values, ds.values);
  EXPECT_EQ(back.kinds, ds.kinds);
}

TEST(DatasetCsv, RoundTrips2D) {
  Dataset ds;
  ds.points.resize(2, 2);
  ds.points << 0.1, 0.9, 0.3, 0.7;
  ds.values.resize(2);
  ds.values << -1e-7, 2.5;
  ds.kinds = {ObservationKind::source, ObservationKind::source};
  std::stringstream ss;
  write_dataset_csv(ds, ss);
  const Dataset back = read_dataset_csv(ss);
  EXPECT_EQ(back.points, ds.points);
  EXPECT_EQ(back.values, ds.values);
  EXPECT_EQ(back.kinds, ds.kinds);
}

TEST(DatasetCsv, RejectsBadHeader) {
  std::stringstream ss("a,b,c\n");
  EXPECT_THROW(read_dataset_csv(ss), IoError);
}

TEST(FilterByKind, KeepsOrderAndKind) {
  Dataset ds;
  ds.points.resize(4, 1);
  ds.points << 0.1, 0.2, 0.3, 0.4;
  ds.values.resize(4);
  ds.values << 1.0, 2.0, 3.0, 4.0;
  ds.kinds = {ObservationKind::solution, ObservationKind::source,
              ObservationKind::solution, ObservationKind::source};
  const Dataset u = filter_by_kind(ds, ObservationKind::solution);
  ASSERT_EQ(u.rows(), 2);
  EXPECT_DOUBLE_EQ(u.points(0, 0), 0.1);
  EXPECT_DOUBLE_EQ(u.points(1, 0), 0.3);
  EXPECT_DOUBLE_EQ(u.values[1], 3.0);
}

}  // namespace
