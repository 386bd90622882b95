#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bvpgp/errors.hpp"

namespace bvpgp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ObservationKind { solution, source };

enum class FaceCondition { dirichlet, neumann };

enum class HyperParam { s2, ell, sigma2 };

// Axis-aligned box. Faces are indexed (2*axis) for the lower face and
// (2*axis + 1) for the upper face.
struct Domain {
  int dim = 1;
  Vector lower;
  Vector upper;

  static Domain unit_interval() {
    Domain d;
    d.dim = 1;
    d.lower = Vector::Zero(1);
    d.upper = Vector::Ones(1);
    return d;
  }

  static Domain unit_square() {
    Domain d;
    d.dim = 2;
    d.lower = Vector::Zero(2);
    d.upper = Vector::Ones(2);
    return d;
  }

  bool contains(const Eigen::Ref<const Vector>& x) const {
    if (x.size() != dim) return false;
    for (int a = 0; a < dim; ++a) {
      if (!(x[a] >= lower[a] && x[a] <= upper[a])) return false;
    }
    return true;
  }
};

// One condition per box face, ordered (x lower, x upper, y lower, y upper).
struct BoundaryConditionSpec {
  std::vector<FaceCondition> faces;

  static BoundaryConditionSpec all_dirichlet(int dim) {
    return {std::vector<FaceCondition>(2 * dim, FaceCondition::dirichlet)};
  }
  static BoundaryConditionSpec all_neumann(int dim) {
    return {std::vector<FaceCondition>(2 * dim, FaceCondition::neumann)};
  }
  // Neumann on the lower faces, Dirichlet on the upper ones (the 2D
  // Helmholtz setup: du/dn = 0 at x=0 and y=0, u = 0 at x=1 and y=1).
  static BoundaryConditionSpec neumann_low_dirichlet_high(int dim) {
    BoundaryConditionSpec bcs;
    bcs.faces.resize(2 * dim);
    for (int a = 0; a < dim; ++a) {
      bcs.faces[2 * a] = FaceCondition::neumann;
      bcs.faces[2 * a + 1] = FaceCondition::dirichlet;
    }
    return bcs;
  }
};

enum class OperatorKind { negative_laplacian, helmholtz };

// L = -laplacian + k^2, with k = 0 for the plain negative Laplacian.
struct OperatorSpec {
  OperatorKind kind = OperatorKind::negative_laplacian;
  double helmholtz_k = 0.0;

  static OperatorSpec negative_laplacian() { return {}; }
  static OperatorSpec helmholtz(double k) {
    if (!std::isfinite(k) || k < 0.0)
      throw ValidationError("helmholtz_k must be finite and >= 0");
    return {OperatorKind::helmholtz, k};
  }

  // Zeroth-order coefficient k^2 in -laplacian + k^2.
  double shift() const {
    return kind == OperatorKind::helmholtz ? helmholtz_k * helmholtz_k : 0.0;
  }
};

// Scattered observations of the solution u and/or the source f = Lu,
// one kind tag per row.
struct Dataset {
  Matrix points;  // N x dim
  Vector values;  // N
  std::vector<ObservationKind> kinds;

  Index rows() const { return points.rows(); }
  int dim() const { return static_cast<int>(points.cols()); }

  Index count(ObservationKind k) const {
    Index n = 0;
    for (auto kind : kinds) n += (kind == k);
    return n;
  }
};

struct Hyperparameters {
  double s2 = 1.0;     // signal variance
  double ell = 0.2;    // correlation length
  double sigma2 = 1e-4;  // noise variance
};

inline void validate_dataset(const Dataset& ds, const Domain& dom) {
  if (ds.rows() == 0) throw EmptyDataset();
  if (ds.dim() != dom.dim)
    throw DimMismatch("dataset dimension " + std::to_string(ds.dim()) +
                      " does not match domain dimension " +
                      std::to_string(dom.dim));
  if (ds.values.size() != ds.rows() ||
      static_cast<Index>(ds.kinds.size()) != ds.rows())
    throw LengthMismatch("points, values and kinds must have equal length");
  for (Index i = 0; i < ds.rows(); ++i) {
    if (!ds.points.row(i).allFinite()) throw NonFiniteValue("point at row " + std::to_string(i) + " is not finite");
    Vector x = ds.points.row(i);
    if (!dom.contains(x)) throw PointOutsideDomain(i);
    if (!std::isfinite(ds.values[i]))
      throw NonFiniteValue("value at row " + std::to_string(i) +
                           " is not finite");
  }
}

// Keep rows of one observation kind, preserving order.
inline Dataset filter_by_kind(const Dataset& ds, ObservationKind kind) {
  Dataset out;
  std::vector<Index> keep;
  for (Index i = 0; i < ds.rows(); ++i)
    if (ds.kinds[i] == kind) keep.push_back(i);
  out.points.resize(static_cast<Index>(keep.size()), ds.points.cols());
  out.values.resize(static_cast<Index>(keep.size()));
  for (Index i = 0; i < static_cast<Index>(keep.size()); ++i) {
    out.points.row(i) = ds.points.row(keep[i]);
    out.values[i] = ds.values[keep[i]];
    out.kinds.push_back(kind);
  }
  return out;
}

inline double relative_l2_error(const Vector& predicted, const Vector& truth) {
  if (predicted.size() != truth.size())
    throw LengthMismatch("predicted and truth vectors differ in length");
  const double denom = truth.norm();
  if (denom == 0.0) throw ZeroReference();
  return (predicted - truth).norm() / denom;
}

// Adds i.i.d. N(0, sigma^2) noise from a generator seeded by rng_seed.
// Same seed, same output; sigma == 0 returns the input unchanged.
inline Vector add_white_noise(const Vector& values, double sigma,
                              std::uint64_t rng_seed) {
  if (!std::isfinite(sigma) || sigma < 0.0)
    throw ValidationError("noise standard deviation must be finite and >= 0");
  if (sigma == 0.0) return values;
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> noise(0.0, sigma);
  Vector out = values;
  for (Index i = 0; i < out.size(); ++i) out[i] += noise(rng);
  return out;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw IoError("trailing characters in number: " + s);
    return v;
  } catch (const std::invalid_argument&) {
    throw IoError("cannot parse number: " + s);
  } catch (const std::out_of_range&) {
    throw IoError("number out of range: " + s);
  }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace detail

inline const char* to_string(ObservationKind k) {
  return k == ObservationKind::solution ? "u" : "f";
}

inline ObservationKind observation_kind_from_string(const std::string& s) {
  if (s == "u") return ObservationKind::solution;
  if (s == "f") return ObservationKind::source;
  throw IoError("unknown observation kind: " + s + " (expected u or f)");
}

// Dataset CSV: header "x1[,x2],value,kind", kind in {u,f}, LF endings.
inline void write_dataset_csv(const Dataset& ds, std::ostream& os) {
  os << (ds.dim() == 1 ? "x1" : "x1,x2") << ",value,kind\n";
  for (Index i = 0; i < ds.rows(); ++i) {
    for (int a = 0; a < ds.dim(); ++a)
      os << detail::format_double(ds.points(i, a)) << ',';
    os << detail::format_double(ds.values[i]) << ',' << to_string(ds.kinds[i])
       << '\n';
  }
}

inline void write_dataset_csv(const Dataset& ds, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_dataset_csv(ds, os);
  if (!os) throw IoError("failed writing " + path);
}

inline Dataset read_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("dataset CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  int dim = 0;
  if (line == "x1,value,kind") dim = 1;
  else if (line == "x1,x2,value,kind") dim = 2;
  else throw IoError("unrecognized dataset CSV header: " + line);

  std::vector<std::array<double, 2>> pts;
  std::vector<double> vals;
  std::vector<ObservationKind> kinds;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (static_cast<int>(fields.size()) != dim + 2)
      throw IoError("bad dataset CSV row: " + line);
    std::array<double, 2> p{0.0, 0.0};
    for (int a = 0; a < dim; ++a) p[a] = detail::parse_double(fields[a]);
    pts.push_back(p);
    vals.push_back(detail::parse_double(fields[dim]));
    kinds.push_back(observation_kind_from_string(fields[dim + 1]));
  }
  Dataset ds;
  ds.points.resize(static_cast<Index>(pts.size()), dim);
  ds.values.resize(static_cast<Index>(vals.size()));
  for (Index i = 0; i < ds.rows(); ++i) {
    for (int a = 0; a < dim; ++a) ds.points(i, a) = pts[i][a];
    ds.values[i] = vals[i];
  }
  ds.kinds = std::move(kinds);
  return ds;
}

inline Dataset read_dataset_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return read_dataset_csv(is);
}

}  // namespace bvpgp
