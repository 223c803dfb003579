#include "fdhomog/curves.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <string>

#include "fdhomog/error.hpp"

namespace fdhomog {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw Error(ErrorCode::Grid, "a grid needs at least 2 points");
  for (std::size_t j = 0; j < points_.size(); ++j) {
    if (!std::isfinite(points_[j])) throw Error(ErrorCode::Grid, "grid point " + std::to_string(j) + " is not finite");
    if (j > 0 && !(points_[j - 1] < points_[j]))
      throw Error(ErrorCode::Grid, "grid is not strictly increasing at index " + std::to_string(j));
  }
}

std::vector<double> Grid::trapezoid_weights() const {
  std::vector<double> w(points_.size(), 0.0);
  for (std::size_t j = 0; j + 1 < points_.size(); ++j) {
    double half = 0.5 * (points_[j + 1] - points_[j]);
    w[j] += half;
    w[j + 1] += half;
  }
  return w;
}

Grid make_grid(double a, double b, std::size_t count) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorCode::InvalidRange, "grid interval requires finite a < b");
  if (count < 2) throw Error(ErrorCode::InvalidRange, "grid needs count >= 2");
  std::vector<double> pts(count);
  double step = (b - a) / static_cast<double>(count - 1);
  for (std::size_t j = 0; j < count; ++j) pts[j] = a + step * static_cast<double>(j);
  pts.back() = b;
  return Grid(std::move(pts));
}

bool grids_match(const Grid& lhs, const Grid& rhs, double tolerance) {
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t j = 0; j < lhs.size(); ++j) {
    if (std::abs(lhs[j] - rhs[j]) > tolerance) return false;
  }
  return true;
}

FunctionalSample::FunctionalSample(Grid grid, std::vector<double> values, std::vector<std::string> labels)
    : grid_(std::move(grid)), values_(std::move(values)), labels_(std::move(labels)) {
  const std::size_t g = grid_.size();
  if (values_.empty() || values_.size() % g != 0)
    throw Error(ErrorCode::Shape, "sample values must form n >= 1 rows of " + std::to_string(g) + " entries");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k]))
      throw Error(ErrorCode::Shape, "non-finite value in curve " + std::to_string(k / g) + " at grid index " +
                                        std::to_string(k % g));
  }
  if (!labels_.empty() && labels_.size() != size())
    throw Error(ErrorCode::Shape, "label count does not match curve count");
}

FunctionalSample FunctionalSample::from_rows(Grid grid, const std::vector<std::vector<double>>& rows,
                                             std::vector<std::string> labels) {
  std::vector<double> values;
  values.reserve(rows.size() * grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != grid.size())
      throw Error(ErrorCode::Shape, "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                        " values, expected " + std::to_string(grid.size()));
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return FunctionalSample(std::move(grid), std::move(values), std::move(labels));
}

FunctionalSample FunctionalSample::subset(std::span<const std::size_t> rows) const {
  const std::size_t g = grid_.size();
  std::vector<double> values;
  values.reserve(rows.size() * g);
  std::vector<std::string> labels;
  for (std::size_t r : rows) {
    if (r >= size()) throw Error(ErrorCode::InvalidArgument, "subset row out of range");
    auto c = curve(r);
    values.insert(values.end(), c.begin(), c.end());
    if (has_labels()) labels.push_back(labels_[r]);
  }
  return FunctionalSample(grid_, std::move(values), std::move(labels));
}

FunctionalSample FunctionalSample::shifted(double c) const {
  std::vector<double> values = values_;
  for (double& v : values) v += c;
  return FunctionalSample(grid_, std::move(values), labels_);
}

void require_same_grid(const FunctionalSample& a, const FunctionalSample& b) {
  if (!grids_match(a.grid(), b.grid()))
    throw Error(ErrorCode::GridMismatch, "samples are observed on different grids (" + std::to_string(a.grid_size()) +
                                             " vs " + std::to_string(b.grid_size()) + " points)");
}

FunctionalSample concatenate(const FunctionalSample& a, const FunctionalSample& b) {
  require_same_grid(a, b);
  std::vector<double> values(a.values().begin(), a.values().end());
  values.insert(values.end(), b.values().begin(), b.values().end());
  std::vector<std::string> labels;
  if (a.has_labels() && b.has_labels()) {
    labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  }
  return FunctionalSample(a.grid(), std::move(values), std::move(labels));
}

double evaluate(MeanFunction mean, double t) noexcept {
  switch (mean) {
    case MeanFunction::Peak32: return 30.0 * t * std::sqrt(t) * (1.0 - t);
    case MeanFunction::Peak12: return 30.0 * t * (1.0 - t) * (1.0 - t);
  }
  return 0.0;
}

std::string_view to_string(MeanFunction mean) noexcept {
  return mean == MeanFunction::Peak32 ? "peak32" : "peak12";
}

std::optional<MeanFunction> parse_mean_function(std::string_view name) noexcept {
  if (name == "peak32") return MeanFunction::Peak32;
  if (name == "peak12") return MeanFunction::Peak12;
  return std::nullopt;
}

void ModelSpec::validate() const {
  if (!(amp > 0.0) || !std::isfinite(amp)) throw Error(ErrorCode::InvalidArgument, "amp must be finite and > 0");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw Error(ErrorCode::InvalidArgument, "rate must be finite and > 0");
  if (!std::isfinite(delta)) throw Error(ErrorCode::InvalidArgument, "delta must be finite");
}

namespace {

Eigen::MatrixXd covariance_factor(const ModelSpec& spec, const Grid& grid) {
  const auto g = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd cov(g, g);
  for (Eigen::Index j = 0; j < g; ++j) {
    for (Eigen::Index l = 0; l < g; ++l) {
      cov(j, l) = spec.amp * std::exp(-spec.rate * std::abs(grid[static_cast<std::size_t>(j)] -
                                                            grid[static_cast<std::size_t>(l)]));
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    cov.diagonal().array() += 1e-10 * spec.amp;
    llt.compute(cov);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorCode::CovarianceFactorization, "covariance matrix is not numerically positive definite");
  }
  return llt.matrixL();
}

}  // namespace

FunctionalSample simulate_sample(const ModelSpec& spec, std::size_t n, const Grid& grid, RngSeed seed) {
  spec.validate();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
  const std::size_t g = grid.size();
  const Eigen::MatrixXd lower = covariance_factor(spec, grid);

  std::vector<double> mean(g);
  for (std::size_t j = 0; j < g; ++j) mean[j] = evaluate(spec.mean, grid[j]);

  std::vector<double> values(n * g);
  Eigen::VectorXd z(static_cast<Eigen::Index>(g));
  for (std::size_t i = 0; i < n; ++i) {
    Engine engine = make_engine(derive_seed(seed, i));
    std::normal_distribution<double> normal;
    for (auto& v : z) v = normal(engine);
    for (std::size_t j = 0; j < g; ++j) {
      double e = 0.0;
      for (std::size_t l = 0; l <= j; ++l) e += lower(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) * z[static_cast<Eigen::Index>(l)];
      // Shift applied last: a curve with delta d is exactly (curve with delta 0) + d.
      values[i * g + j] = (mean[j] + e) + spec.delta;
    }
  }
  return FunctionalSample(grid, std::move(values));
}

}  // namespace fdhomog
