#include "ncpii/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace ncpii {

GridFunction::GridFunction(double start, double step, std::vector<RingValue> values)
    : start_(start), step_(step), values_(std::move(values)) {
    if (!(step_ > 0.0)) throw std::invalid_argument("grid step must be > 0");
    for (const auto& v : values_)
        if (v.dim() != values_.front().dim()) throw DimensionMismatch("grid samples must share one dimension");
}

GridFunction GridFunction::sample(double start, double step, int count, const std::function<RingValue(double)>& f) {
    std::vector<RingValue> v;
    v.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) v.push_back(f(start + step * k));
    return GridFunction(start, step, std::move(v));
}

GridFunction GridFunction::constant(double start, double step, int count, const RingValue& v) {
    return GridFunction(start, step, std::vector<RingValue>(static_cast<std::size_t>(count), v));
}

void GridFunction::require_points(int n, const char* what) const {
    if (count() < n)
        throw GridTooShort(std::string(what) + " needs at least " + std::to_string(n) + " grid points, got " +
                           std::to_string(count()));
}

namespace {

template <std::size_t N>
RingValue combine(const GridFunction& g, int first, const std::array<double, N>& w, double scale, bool reversed) {
    RingValue acc = RingValue::zero(g.dim());
    for (std::size_t k = 0; k < N; ++k) {
        const int idx = reversed ? first - static_cast<int>(k) : first + static_cast<int>(k);
        acc += (w[k] * scale) * g[idx];
    }
    return acc;
}

}  // namespace

GridFunction GridFunction::derivative() const {
    require_points(kMinPoints, "derivative");
    const double s = 1.0 / (12.0 * step_);
    static constexpr std::array<double, 5> central{1, -8, 0, 8, -1};
    static constexpr std::array<double, 5> edge0{-25, 48, -36, 16, -3};
    static constexpr std::array<double, 5> edge1{-3, -10, 18, -6, 1};
    const int n = count();
    std::vector<RingValue> out(static_cast<std::size_t>(n));
    for (int k = 2; k < n - 2; ++k) out[static_cast<std::size_t>(k)] = combine(*this, k - 2, central, s, false);
    out[0] = combine(*this, 0, edge0, s, false);
    out[1] = combine(*this, 0, edge1, s, false);
    // Mirrored stencils pick up a sign for an odd derivative.
    out[static_cast<std::size_t>(n - 1)] = combine(*this, n - 1, edge0, -s, true);
    out[static_cast<std::size_t>(n - 2)] = combine(*this, n - 1, edge1, -s, true);
    return GridFunction(start_, step_, std::move(out));
}

GridFunction GridFunction::second_derivative() const {
    require_points(kMinPoints, "second derivative");
    const double s = 1.0 / (12.0 * step_ * step_);
    static constexpr std::array<double, 5> central{-1, 16, -30, 16, -1};
    static constexpr std::array<double, 6> edge0{45, -154, 214, -156, 61, -10};
    static constexpr std::array<double, 6> edge1{10, -15, -4, 14, -6, 1};
    const int n = count();
    std::vector<RingValue> out(static_cast<std::size_t>(n));
    for (int k = 2; k < n - 2; ++k) out[static_cast<std::size_t>(k)] = combine(*this, k - 2, central, s, false);
    out[0] = combine(*this, 0, edge0, s, false);
    out[1] = combine(*this, 0, edge1, s, false);
    out[static_cast<std::size_t>(n - 1)] = combine(*this, n - 1, edge0, s, true);
    out[static_cast<std::size_t>(n - 2)] = combine(*this, n - 1, edge1, s, true);
    return GridFunction(start_, step_, std::move(out));
}

RingValue GridFunction::interpolate(double z) const {
    require_points(4, "interpolation");
    const double t = (z - start_) / step_;
    if (t < -1e-9 || t > count() - 1 + 1e-9)
        throw std::out_of_range("interpolation at z=" + std::to_string(z) + " outside the grid");
    int base = static_cast<int>(std::floor(t)) - 1;
    base = std::clamp(base, 0, count() - 4);
    RingValue acc = RingValue::zero(dim());
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) w *= (t - (base + b)) / static_cast<double>(a - b);
        acc += w * values_[static_cast<std::size_t>(base + a)];
    }
    return acc;
}

bool GridFunction::same_grid(const GridFunction& o, double tol) const {
    return count() == o.count() && std::abs(start_ - o.start_) <= tol && std::abs(step_ - o.step_) <= tol * step_;
}

GridFunction GridFunction::map(const std::function<RingValue(const RingValue&)>& f) const {
    std::vector<RingValue> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(f(v));
    return GridFunction(start_, step_, std::move(out));
}

GridFunction GridFunction::zip(const GridFunction& o,
                               const std::function<RingValue(const RingValue&, const RingValue&)>& f) const {
    if (!same_grid(o)) throw std::invalid_argument("grid functions live on different grids");
    std::vector<RingValue> out;
    out.reserve(values_.size());
    for (std::size_t k = 0; k < values_.size(); ++k) out.push_back(f(values_[k], o.values_[k]));
    return GridFunction(start_, step_, std::move(out));
}

double ResidualReport::max_norm() const {
    double m = 0.0;
    for (const auto& p : points) {
        if (p.masked) continue;
        if (!std::isfinite(p.norm)) return std::numeric_limits<double>::infinity();
        m = std::max(m, p.norm);
    }
    return m;
}

double ResidualReport::max_z() const {
    double m = -1.0, z = std::numeric_limits<double>::quiet_NaN();
    for (const auto& p : points) {
        if (p.masked) continue;
        if (!std::isfinite(p.norm)) return p.z;
        if (p.norm > m) {
            m = p.norm;
            z = p.z;
        }
    }
    return z;
}

int ResidualReport::masked_count() const {
    return static_cast<int>(std::count_if(points.begin(), points.end(), [](const ResidualPoint& p) { return p.masked; }));
}

void ResidualReport::mask_near(const std::vector<bool>& poles, int radius) {
    const int n = static_cast<int>(points.size());
    std::vector<bool> hit(points.size(), false);
    for (int k = 0; k < n; ++k) {
        const bool pole = (k < static_cast<int>(poles.size()) && poles[static_cast<std::size_t>(k)]) ||
                          !std::isfinite(points[static_cast<std::size_t>(k)].norm);
        if (!pole) continue;
        for (int j = std::max(0, k - radius); j <= std::min(n - 1, k + radius); ++j) hit[static_cast<std::size_t>(j)] = true;
    }
    for (int k = 0; k < n; ++k)
        if (hit[static_cast<std::size_t>(k)]) points[static_cast<std::size_t>(k)].masked = true;
}

void ResidualReport::mask_region(double z0, double half_width) {
    for (auto& p : points)
        if (std::abs(p.z - z0) <= half_width) p.masked = true;
}

std::string ResidualReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "z,norm,masked\n";
    for (const auto& p : points) os << p.z << ',' << p.norm << ',' << (p.masked ? 1 : 0) << '\n';
    return os.str();
}

ResidualReport residual_report(const std::string& name, const GridFunction& residual, double tolerance) {
    ResidualReport r;
    r.name = name;
    r.tolerance = tolerance;
    r.points.reserve(static_cast<std::size_t>(residual.count()));
    for (int k = 0; k < residual.count(); ++k) r.points.push_back({residual.z(k), residual[k].norm(), false});
    return r;
}

}  // namespace ncpii
