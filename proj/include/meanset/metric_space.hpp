#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "meanset/constants.hpp"
#include "meanset/csv.hpp"
#include "meanset/errors.hpp"
#include "meanset/rng.hpp"

namespace meanset {

// Points of a finite metric space are addressed by their index into the
// space's universe; all estimators below work on these indices.
using PointId = std::size_t;

// A finite metric space: a universe of size() points with a pairwise
// distance. Implementations must be symmetric, zero on the diagonal and
// satisfy the triangle inequality (FiniteMatrix validates this on input;
// the analytic spaces satisfy it by construction).
class MetricSpace {
public:
    virtual ~MetricSpace() = default;

    virtual std::size_t size() const = 0;
    virtual double distance(PointId a, PointId b) const = 0;

    // Largest pairwise distance. The default scans all pairs; subclasses
    // override when a cheaper exact value is available.
    virtual double diameter() const {
        const std::size_t n = size();
        double best = 0.0;
        for (PointId i = 0; i < n; ++i) {
            for (PointId j = i + 1; j < n; ++j) {
                best = std::max(best, distance(i, j));
            }
        }
        return best;
    }
};

// ---------------------------------------------------------------------------
// FiniteMatrix: an explicit n x n distance matrix, validated on construction.
// ---------------------------------------------------------------------------

class FiniteMatrix final : public MetricSpace {
public:
    explicit FiniteMatrix(std::vector<std::vector<double>> entries) : d_(std::move(entries)) {
        validate();
    }

    // Loads an n x n matrix from a headerless CSV file.
    static FiniteMatrix from_csv(const std::string& path) {
        return FiniteMatrix(read_numeric_csv(path));
    }

    std::size_t size() const override { return d_.size(); }

    double distance(PointId a, PointId b) const override { return d_[a][b]; }

    double diameter() const override { return max_entry_; }

    const std::vector<std::vector<double>>& entries() const { return d_; }

private:
    void validate() {
        const std::size_t n = d_.size();
        if (n == 0) {
            throw input_error("distance matrix: no rows");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (d_[i].size() != n) {
                throw input_error("distance matrix: row " + std::to_string(i + 1) + " has " +
                                  std::to_string(d_[i].size()) + " columns, expected " +
                                  std::to_string(n));
            }
        }
        max_entry_ = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double v = d_[i][j];
                if (!std::isfinite(v) || v < 0.0) {
                    throw input_error("distance matrix: entry (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ") = " + format_double(v) +
                                      " is not a finite non-negative number");
                }
                max_entry_ = std::max(max_entry_, v);
            }
        }
        const double tol = kMetricTol * std::max(1.0, max_entry_);
        for (std::size_t i = 0; i < n; ++i) {
            if (d_[i][i] != 0.0) {
                throw input_error("distance matrix: diagonal entry (" + std::to_string(i + 1) +
                                  "," + std::to_string(i + 1) + ") = " + format_double(d_[i][i]) +
                                  " must be exactly 0");
            }
            for (std::size_t j = i + 1; j < n; ++j) {
                if (std::abs(d_[i][j] - d_[j][i]) > tol) {
                    throw input_error("distance matrix: asymmetric pair (" + std::to_string(i + 1) +
                                      "," + std::to_string(j + 1) + "): " + format_double(d_[i][j]) +
                                      " vs " + format_double(d_[j][i]));
                }
                // Tiny asymmetries within tolerance are unified so that all
                // downstream arithmetic sees one value per pair.
                d_[j][i] = d_[i][j];
            }
        }
        if (n <= kFullTriangleCheckLimit) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    for (std::size_t k = 0; k < n; ++k) {
                        check_triangle(i, j, k, tol);
                    }
                }
            }
        } else {
            // Spot-check random triples; the stream is fixed so validation is
            // deterministic for a given matrix size.
            CounterRng rng(derive_stream(0x7269616e676c65ULL, {n}));
            for (std::size_t t = 0; t < kTriangleSpotChecks; ++t) {
                const std::size_t i = static_cast<std::size_t>(rng.next_u64() % n);
                const std::size_t j = static_cast<std::size_t>(rng.next_u64() % n);
                const std::size_t k = static_cast<std::size_t>(rng.next_u64() % n);
                check_triangle(i, j, k, tol);
            }
        }
    }

    void check_triangle(std::size_t i, std::size_t j, std::size_t k, double tol) const {
        if (d_[i][k] > d_[i][j] + d_[j][k] + tol) {
            throw input_error("distance matrix: triangle inequality fails for points (" +
                              std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                              std::to_string(k + 1) + "): d(i,k) = " + format_double(d_[i][k]) +
                              " > d(i,j) + d(j,k) = " + format_double(d_[i][j] + d_[j][k]));
        }
    }

    std::vector<std::vector<double>> d_;
    double max_entry_ = 0.0;
};

// ---------------------------------------------------------------------------
// EuclideanPoints: a finite point cloud in R^d under the Euclidean metric.
// ---------------------------------------------------------------------------

class EuclideanPoints final : public MetricSpace {
public:
    explicit EuclideanPoints(std::vector<std::vector<double>> points) : pts_(std::move(points)) {
        if (pts_.empty()) {
            throw input_error("point cloud: no rows");
        }
        const std::size_t dim = pts_[0].size();
        if (dim == 0) {
            throw input_error("point cloud: row 1 has no coordinates");
        }
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            if (pts_[i].size() != dim) {
                throw input_error("point cloud: row " + std::to_string(i + 1) + " has " +
                                  std::to_string(pts_[i].size()) + " coordinates, expected " +
                                  std::to_string(dim));
            }
            for (std::size_t c = 0; c < dim; ++c) {
                if (!std::isfinite(pts_[i][c])) {
                    throw input_error("point cloud: row " + std::to_string(i + 1) + ", column " +
                                      std::to_string(c + 1) + " is not finite");
                }
            }
        }
    }

    // Loads one point per row from a headerless CSV file.
    static EuclideanPoints from_csv(const std::string& path) {
        return EuclideanPoints(read_numeric_csv(path));
    }

    std::size_t size() const override { return pts_.size(); }

    double distance(PointId a, PointId b) const override {
        const std::vector<double>& x = pts_[a];
        const std::vector<double>& y = pts_[b];
        double s = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) {
            const double d = x[c] - y[c];
            s += d * d;
        }
        return std::sqrt(s);
    }

    const std::vector<std::vector<double>>& points() const { return pts_; }

private:
    std::vector<std::vector<double>> pts_;
};

// ---------------------------------------------------------------------------
// ArcSpace: the unit-circle subset {theta = 0} united with the closed arc
// [pi/2, 3pi/2], carrying the circle's geodesic metric rescaled by 2/pi so
// that a quarter turn has length 1. The universe is a discrete theta-grid
// (candidate 0 is the isolated point theta = 0; the rest sample the arc
// uniformly including both endpoints), but distances are always evaluated
// from the analytic formula, never tabulated.
// ---------------------------------------------------------------------------

class ArcSpace final : public MetricSpace {
public:
    explicit ArcSpace(std::size_t grid_size = 2048) {
        if (grid_size < 3) {
            throw input_error("arc space: grid size must be at least 3");
        }
        thetas_.reserve(grid_size);
        thetas_.push_back(0.0);
        const std::size_t m = grid_size - 1;  // points on the arc
        for (std::size_t i = 0; i < m; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(m - 1);
            thetas_.push_back(kPi / 2.0 + t * kPi);
        }
    }

    // Shortest-arc distance between two angles, rescaled by 2/pi.
    static double arc_distance(double theta_a, double theta_b) {
        double diff = std::fmod(std::abs(theta_a - theta_b), 2.0 * kPi);
        diff = std::min(diff, 2.0 * kPi - diff);
        return diff * (2.0 / kPi);
    }

    std::size_t size() const override { return thetas_.size(); }

    double distance(PointId a, PointId b) const override {
        return arc_distance(thetas_[a], thetas_[b]);
    }

    // The two farthest points (the arc endpoints, a half turn apart) are on
    // the grid by construction, so the diameter is exactly 2.
    double diameter() const override { return 2.0; }

    double theta(PointId i) const { return thetas_[i]; }

    // Grid ids of the distinguished angles. north/south are the arc
    // endpoints pi/2 and 3pi/2; west is the antipode pi of the isolated
    // point, present on the grid whenever the arc point count is odd.
    PointId north_id() const { return 1; }
    PointId south_id() const { return thetas_.size() - 1; }
    PointId west_id() const {
        const std::size_t m = thetas_.size() - 1;
        if (m % 2 == 0) {
            throw input_error("arc space: theta = pi is on the grid only for odd arc point counts "
                              "(even total grid size)");
        }
        return 1 + (m - 1) / 2;
    }

    static constexpr double kPi = 3.14159265358979323846;

private:
    std::vector<double> thetas_;
};

}  // namespace meanset
