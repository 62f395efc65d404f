#include "ncpii/darboux.hpp"

#include <algorithm>
#include <cmath>

namespace ncpii {

PointwiseSingularity::PointwiseSingularity(const std::string& what, std::vector<double> zs)
    : std::runtime_error(what + " (" + std::to_string(zs.size()) + " grid point(s), first at z=" +
                         (zs.empty() ? std::string("?") : std::to_string(zs.front())) + ")"),
      zs_(std::move(zs)) {}

namespace {

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what) {
    if (!a.same_grid(b)) throw std::invalid_argument(std::string(what) + ": grids differ");
    if (a.dim() != b.dim()) throw DimensionMismatch(std::string(what) + ": dimensions differ");
}

// Applies f at every point; all points where an inverse is refused are
// collected before throwing.
GridFunction pointwise(const GridFunction& ref, const std::string& what, const std::function<RingValue(int)>& f) {
    std::vector<RingValue> out;
    out.reserve(static_cast<std::size_t>(ref.count()));
    std::vector<double> bad;
    for (int k = 0; k < ref.count(); ++k) {
        try {
            out.push_back(f(k));
        } catch (const SingularValue&) {
            bad.push_back(ref.z(k));
            out.push_back(RingValue::zero(ref.dim()));
        } catch (const SingularQuasideterminant&) {
            bad.push_back(ref.z(k));
            out.push_back(RingValue::zero(ref.dim()));
        }
    }
    if (!bad.empty()) throw PointwiseSingularity(what, std::move(bad));
    return GridFunction(ref.start(), ref.step(), std::move(out));
}

RingValue block(const CMatrix& m, int r, int c, int d) { return RingValue(CMatrix(m.block(r * d, c * d, d, d))); }

}  // namespace

double linear_system_residual(LinearSystemKind kind, const GridFunction& q, const EigenSolution& s) {
    require_same_grid(q, s.X, "linear system residual");
    require_same_grid(q, s.Y, "linear system residual");
    const GridFunction dX = s.X.derivative(), dY = s.Y.derivative();
    const int d = q.dim();
    double worst = 0.0;
    for (int k = 0; k < q.count(); ++k) {
        const CMatrix M = linear_system_matrix(kind, s.lambda, q[k]);
        RingValue rx = dX[k] - block(M, 0, 0, d) * s.X[k] - block(M, 0, 1, d) * s.Y[k];
        RingValue ry = dY[k] - block(M, 1, 0, d) * s.X[k] - block(M, 1, 1, d) * s.Y[k];
        worst = std::max(worst, std::sqrt(rx.norm() * rx.norm() + ry.norm() * ry.norm()));
    }
    return worst;
}

EigenData::EigenData(LinearSystemKind kind, GridFunction q, std::vector<EigenSolution> slots, double tol_residual)
    : kind_(kind), q_(std::move(q)), slots_(std::move(slots)) {
    if (slots_.empty()) throw std::invalid_argument("eigen data needs at least slot 0");
    for (std::size_t k = 0; k < slots_.size(); ++k) {
        const double r = linear_system_residual(kind_, q_, slots_[k]);
        max_residual_ = std::max(max_residual_, r);
        if (!(r <= tol_residual))
            throw std::invalid_argument("eigen data slot " + std::to_string(k) + " does not solve its linear system: residual " +
                                        std::to_string(r) + " > " + std::to_string(tol_residual));
    }
}

EigenData EigenData::integrate(LinearSystemKind kind, const GridFunction& q, const std::vector<cplx>& lambdas,
                               const std::vector<std::pair<RingValue, RingValue>>& init, double tol_residual) {
    if (lambdas.size() != init.size()) throw std::invalid_argument("one initial pair per spectral value is required");
    std::vector<EigenSolution> slots;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        LinearSolution s = integrate_linear_system(kind, lambdas[k], q, init[k].first, init[k].second);
        slots.push_back({lambdas[k], std::move(s.X), std::move(s.Y)});
    }
    return EigenData(kind, q, std::move(slots), tol_residual);
}

TransformedPair transform_eigenfunctions(const GridFunction& X, const GridFunction& Y, const GridFunction& X1,
                                         const GridFunction& Y1, cplx lambda, cplx lambda1) {
    require_same_grid(X, Y, "transform");
    require_same_grid(X, X1, "transform");
    require_same_grid(X, Y1, "transform");
    TransformedPair t;
    t.X = pointwise(X, "X1 singular in the transformation",
                    [&](int k) { return lambda * Y[k] - lambda1 * (Y1[k] * X1[k].inverse() * X[k]); });
    t.Y = pointwise(X, "Y1 singular in the transformation",
                    [&](int k) { return lambda * X[k] - lambda1 * (X1[k] * Y1[k].inverse() * Y[k]); });
    return t;
}

GridFunction one_fold_q(const GridFunction& q, const GridFunction& X1, const GridFunction& Y1) {
    require_same_grid(q, X1, "one-fold");
    require_same_grid(q, Y1, "one-fold");
    return pointwise(q, "X1 singular in the one-fold transformation", [&](int k) {
        RingValue s = Y1[k] * X1[k].inverse();
        return s * q[k] * s;
    });
}

std::vector<bool> pole_mask(const GridFunction& X1, const GridFunction& Y1, double threshold) {
    std::vector<bool> poles(static_cast<std::size_t>(X1.count()), false);
    for (int k = 0; k < X1.count(); ++k) {
        try {
            poles[static_cast<std::size_t>(k)] = (Y1[k] * X1[k].inverse()).norm() > threshold;
        } catch (const SingularValue&) {
            poles[static_cast<std::size_t>(k)] = true;
        }
    }
    return poles;
}

CovarianceReport covariance_diagnostic(const GridFunction& q1, const TransformedPair& t, cplx lambda,
                                       const std::vector<bool>& poles, int pole_radius) {
    require_same_grid(q1, t.X, "covariance");
    require_same_grid(q1, t.Y, "covariance");
    const GridFunction dX = t.X.derivative(), dY = t.Y.derivative();
    CovarianceReport rep;
    rep.combined.name = "covariance";
    rep.x_line.name = "covariance_x_line";
    rep.y_line.name = "covariance_y_line";
    for (int k = 0; k < q1.count(); ++k) {
        const double nx = (dX[k] - lambda * t.X[k] - q1[k] * t.Y[k]).norm();
        const double ny = (dY[k] - lambda * t.Y[k] - q1[k] * t.X[k]).norm();
        rep.x_line.points.push_back({q1.z(k), nx});
        rep.y_line.points.push_back({q1.z(k), ny});
        rep.combined.points.push_back({q1.z(k), std::sqrt(nx * nx + ny * ny)});
    }
    for (ResidualReport* r : {&rep.combined, &rep.x_line, &rep.y_line}) {
        r->mask_near(poles, pole_radius);
        r->metadata.emplace_back("lambda", std::to_string(lambda.real()) + (lambda.imag() >= 0 ? "+" : "") +
                                               std::to_string(lambda.imag()) + "i");
    }
    return rep;
}

namespace {

template <typename T, typename W, typename Pow>
SquareArray<T> alternating(const std::vector<ArrayColumn<T, W>>& columns, Pow pw) {
    const int n = static_cast<int>(columns.size());
    if (n < 1) throw std::invalid_argument("alternating array needs at least one column");
    SquareArray<T> A(n, columns.front().primary);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) {
            const auto& col = columns[static_cast<std::size_t>(c)];
            A(r + 1, c + 1) = pw(col.weight, r, r % 2 == 0 ? col.primary : col.secondary);
        }
    return A;
}

ArrayColumn<RingValue, cplx> column_at(const EigenSolution& s, ArrayKind kind, int p) {
    return kind == ArrayKind::X ? ArrayColumn<RingValue, cplx>{s.lambda, s.X[p], s.Y[p]}
                                : ArrayColumn<RingValue, cplx>{s.lambda, s.Y[p], s.X[p]};
}

// Columns k-1, ..., 1 followed by the target k.
std::vector<ArrayColumn<RingValue, cplx>> theta_columns(const EigenData& E, int k, ArrayKind kind, int p) {
    std::vector<ArrayColumn<RingValue, cplx>> cols;
    for (int j = k - 1; j >= 1; --j) cols.push_back(column_at(E[j], kind, p));
    cols.push_back(column_at(E[k], kind, p));
    return cols;
}

void require_slots(const EigenData& E, int N) {
    if (N < 1) throw std::invalid_argument("fold count N must be >= 1");
    if (E.size() < N + 1)
        throw std::invalid_argument("eigen data has " + std::to_string(E.size() - 1) + " particular solution(s), " +
                                    std::to_string(N) + " requested");
}

}  // namespace

SquareArray<RingValue> alternating_array(const std::vector<ArrayColumn<RingValue, cplx>>& columns) {
    return alternating(columns, [](cplx w, int r, const RingValue& v) { return std::pow(w, r) * v; });
}

SquareArray<NCExpr> alternating_array(const std::vector<ArrayColumn<NCExpr, NCExpr>>& columns) {
    return alternating(columns, [](const NCExpr& w, int r, const NCExpr& v) { return power(w, r) * v; });
}

SquareArray<RingValue> build_upsilon(const EigenData& E, int N, ArrayKind kind, Parity parity, int k) {
    require_slots(E, N);
    const bool odd_order = (N + 1) % 2 == 1;
    if (odd_order != (parity == Parity::Odd))
        throw std::invalid_argument("parity does not match the array order " + std::to_string(N + 1));
    std::vector<ArrayColumn<RingValue, cplx>> cols;
    for (int j = N; j >= 0; --j) cols.push_back(column_at(E[j], kind, k));
    return alternating_array(cols);
}

SquareArray<NCExpr> build_upsilon_symbolic(int N, ArrayKind kind) {
    if (N < 0) throw std::invalid_argument("fold count N must be >= 0");
    std::vector<ArrayColumn<NCExpr, NCExpr>> cols;
    for (int j = N; j >= 0; --j) {
        NCExpr x = NCExpr::generator("X" + std::to_string(j));
        NCExpr y = NCExpr::generator("Y" + std::to_string(j));
        NCExpr w = NCExpr::central("lambda" + std::to_string(j));
        cols.push_back(kind == ArrayKind::X ? ArrayColumn<NCExpr, NCExpr>{w, x, y} : ArrayColumn<NCExpr, NCExpr>{w, y, x});
    }
    return alternating_array(cols);
}

RingValue theta_quasideterminant(const EigenData& E, int k, int p) {
    require_slots(E, k);
    const auto ox = alternating_array(theta_columns(E, k, ArrayKind::X, p));
    const auto oy = alternating_array(theta_columns(E, k, ArrayKind::Y, p));
    return quasideterminant(oy, k, k) * quasideterminant(ox, k, k).inverse();
}

std::vector<GridFunction> theta_quasideterminant_form(const EigenData& E, int N) {
    require_slots(E, N);
    std::vector<GridFunction> out;
    for (int k = 1; k <= N; ++k)
        out.push_back(pointwise(E.q(), "singular factor " + std::to_string(k),
                                [&](int p) { return theta_quasideterminant(E, k, p); }));
    return out;
}

std::vector<GridFunction> theta_product_form(const EigenData& E, int N) {
    require_slots(E, N);
    std::vector<GridFunction> X, Y;
    for (int j = 0; j <= N; ++j) {
        X.push_back(E[j].X);
        Y.push_back(E[j].Y);
    }
    std::vector<GridFunction> out;
    for (int k = 1; k <= N; ++k) {
        out.push_back(pointwise(E.q(), "singular factor " + std::to_string(k),
                                [&](int p) { return Y[k][p] * X[k][p].inverse(); }));
        for (int j = k + 1; j <= N; ++j) {
            TransformedPair t = transform_eigenfunctions(X[j], Y[j], X[k], Y[k], E[j].lambda, E[k].lambda);
            X[j] = std::move(t.X);
            Y[j] = std::move(t.Y);
        }
    }
    return out;
}

GridFunction sandwich_inner_first(const GridFunction& q, const std::vector<GridFunction>& thetas) {
    GridFunction r = q;
    for (const auto& t : thetas) r = r.zip(t, [](const RingValue& a, const RingValue& th) { return th * a * th; });
    return r;
}

GridFunction phi_n_fold(const GridFunction& phi, const EigenData& E, int N) {
    return sandwich_inner_first(phi, theta_quasideterminant_form(E, N));
}

GridFunction phi_n_fold_product(const GridFunction& phi, const EigenData& E, int N) {
    return sandwich_inner_first(phi, theta_product_form(E, N));
}

GridFunction ncpii_n_fold(const GridFunction& u_seed, const EigenData& E_pii, int N) {
    std::vector<GridFunction> th = theta_quasideterminant_form(E_pii, N);
    std::reverse(th.begin(), th.end());
    return sandwich_inner_first(u_seed, th);
}

double max_relative_error(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "relative error");
    double worst = 0.0;
    for (int k = 0; k < a.count(); ++k) worst = std::max(worst, relative_error(a[k], b[k]));
    return worst;
}

}  // namespace ncpii
