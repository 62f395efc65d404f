#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncpii/ring_value.hpp"

namespace ncpii {

class GridTooShort : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Matrix-valued samples on the uniform grid z_k = start + k*step.
class GridFunction {
public:
    static constexpr int kMinPoints = 6;

    GridFunction() = default;
    GridFunction(double start, double step, std::vector<RingValue> values);

    static GridFunction sample(double start, double step, int count, const std::function<RingValue(double)>& f);
    static GridFunction constant(double start, double step, int count, const RingValue& v);

    double start() const { return start_; }
    double step() const { return step_; }
    int count() const { return static_cast<int>(values_.size()); }
    int dim() const { return values_.empty() ? 0 : values_.front().dim(); }
    double z(int k) const { return start_ + step_ * k; }
    double stop() const { return z(count() - 1); }

    const RingValue& operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }
    RingValue& operator[](int k) { return values_[static_cast<std::size_t>(k)]; }
    const std::vector<RingValue>& values() const { return values_; }

    // Fourth-order finite differences: five-point central stencil inside,
    // one-sided stencils at the two points nearest each end (six points for
    // the second derivative there). Needs count() >= kMinPoints.
    GridFunction derivative() const;
    GridFunction second_derivative() const;

    // Cubic Lagrange interpolation on the four samples around z; z must lie
    // on the grid interval.
    RingValue interpolate(double z) const;

    bool same_grid(const GridFunction& o, double tol = 1e-12) const;

    // Pointwise maps.
    GridFunction map(const std::function<RingValue(const RingValue&)>& f) const;
    GridFunction zip(const GridFunction& o, const std::function<RingValue(const RingValue&, const RingValue&)>& f) const;

private:
    void require_points(int n, const char* what) const;

    double start_ = 0.0;
    double step_ = 1.0;
    std::vector<RingValue> values_;
};

struct ResidualPoint {
    double z;
    double norm;
    bool masked = false;
};

// Per-point residual norms plus metadata. max_norm() ignores masked points.
struct ResidualReport {
    std::string name;
    std::vector<ResidualPoint> points;
    double tolerance = 0.0;
    std::vector<std::pair<std::string, std::string>> metadata;

    double max_norm() const;
    double max_z() const;
    int masked_count() const;
    bool pass() const { return max_norm() < tolerance; }

    // Masks every point within `radius` grid points of a point whose norm is
    // not finite or whose flag is set in `poles`.
    void mask_near(const std::vector<bool>& poles, int radius);
    void mask_region(double z0, double half_width);

    // Columns: z,norm,masked.
    std::string to_csv() const;
};

ResidualReport residual_report(const std::string& name, const GridFunction& residual, double tolerance);

}  // namespace ncpii
