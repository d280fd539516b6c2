#include "conekit/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "conekit/rng.hpp"

namespace conekit {

ConeModel ConeModel::orthant(int n, std::string label) {
    if (n < 1) throw std::invalid_argument("orthant: dim must be >= 1");
    ConeModel c;
    c.kind_ = ConeKind::Orthant;
    c.dim_ = n;
    c.label_ = label.empty() ? "orthant(" + std::to_string(n) + ")" : std::move(label);
    return c;
}

ConeModel ConeModel::lorentz(int n, std::string label) {
    if (n < 2) throw std::invalid_argument("lorentz: dim must be >= 2");
    ConeModel c;
    c.kind_ = ConeKind::Lorentz;
    c.dim_ = n;
    c.label_ = label.empty() ? "lorentz(" + std::to_string(n) + ")" : std::move(label);
    return c;
}

ConeModel ConeModel::simplicial(const Mat& a, std::string label) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw std::invalid_argument("simplicial: A must be square");
    if (!a.allFinite()) throw std::invalid_argument("simplicial: A has non-finite entries");
    Eigen::FullPivLU<Mat> lu(a);
    const double abs_det = std::abs(lu.determinant());
    if (!(abs_det > kDetEps))
        throw std::invalid_argument("simplicial: |det A| <= 1e-10 (singularity guard)");
    ConeModel c;
    c.kind_ = ConeKind::Simplicial;
    c.dim_ = static_cast<int>(a.rows());
    c.label_ = label.empty() ? "simplicial(" + std::to_string(a.rows()) + ")" : std::move(label);
    auto s = std::make_shared<Simplicial>();
    s->a = a;
    s->a_inv = lu.inverse();
    s->abs_det = abs_det;
    c.simp_ = std::move(s);
    return c;
}

ConeModel ConeModel::product(std::vector<ConeModel> factors, std::string label) {
    if (factors.empty()) throw std::invalid_argument("product: needs at least one factor");
    ConeModel c;
    c.kind_ = ConeKind::Product;
    c.dim_ = 0;
    for (const auto& f : factors) c.dim_ += f.dim();
    if (label.empty()) {
        label = "product(";
        for (size_t i = 0; i < factors.size(); ++i)
            label += (i ? "," : "") + factors[i].label();
        label += ")";
    }
    c.label_ = std::move(label);
    c.factors_ = std::make_shared<const std::vector<ConeModel>>(std::move(factors));
    return c;
}

const Mat& ConeModel::matrix() const {
    if (!simp_) throw std::logic_error("matrix(): not a simplicial cone");
    return simp_->a;
}
const Mat& ConeModel::matrix_inv() const {
    if (!simp_) throw std::logic_error("matrix_inv(): not a simplicial cone");
    return simp_->a_inv;
}
double ConeModel::abs_det() const {
    if (!simp_) throw std::logic_error("abs_det(): not a simplicial cone");
    return simp_->abs_det;
}
const std::vector<ConeModel>& ConeModel::factors() const {
    if (!factors_) throw std::logic_error("factors(): not a product cone");
    return *factors_;
}

Vec ConeModel::axis() const {
    switch (kind_) {
        case ConeKind::Orthant:
            return Vec::Constant(dim_, 1.0 / std::sqrt(double(dim_)));
        case ConeKind::Lorentz: {
            Vec a = Vec::Zero(dim_);
            a[dim_ - 1] = 1.0;
            return a;
        }
        case ConeKind::Simplicial: {
            Vec a = simp_->a * Vec::Ones(dim_);
            return a / a.norm();
        }
        case ConeKind::Product: {
            Vec a(dim_);
            int off = 0;
            for (const auto& f : *factors_) {
                a.segment(off, f.dim()) = f.axis();
                off += f.dim();
            }
            return a / a.norm();
        }
    }
    throw std::logic_error("axis: bad kind");
}

void check_point(const ConeModel& cone, const Vec& x) {
    if (x.size() != cone.dim())
        throw std::invalid_argument("point dim " + std::to_string(x.size()) +
                                    " does not match cone dim " + std::to_string(cone.dim()));
    if (!x.allFinite()) throw std::invalid_argument("point has non-finite coordinates");
}

bool contains(const ConeModel& cone, const Vec& x) {
    check_point(cone, x);
    switch (cone.kind()) {
        case ConeKind::Orthant:
            return (x.array() > 0.0).all();
        case ConeKind::Lorentz: {
            const int n = cone.dim();
            return x[n - 1] > x.head(n - 1).norm();
        }
        case ConeKind::Simplicial: {
            Vec u = cone.matrix_inv() * x;
            return (u.array() > 0.0).all();
        }
        case ConeKind::Product: {
            int off = 0;
            for (const auto& f : cone.factors()) {
                if (!contains(f, x.segment(off, f.dim()))) return false;
                off += f.dim();
            }
            return true;
        }
    }
    return false;
}

ConeModel dual(const ConeModel& cone) {
    switch (cone.kind()) {
        case ConeKind::Orthant:
            return cone;  // self-dual
        case ConeKind::Lorentz:
            return cone;  // self-dual
        case ConeKind::Simplicial: {
            // A^t maps (A V)^* onto V^*, so (A orthant)^* = (A^t)^{-1} orthant
            Mat b = cone.matrix().transpose().inverse();
            return ConeModel::simplicial(b, cone.label() + "*");
        }
        case ConeKind::Product: {
            std::vector<ConeModel> duals;
            duals.reserve(cone.factors().size());
            for (const auto& f : cone.factors()) duals.push_back(dual(f));
            return ConeModel::product(std::move(duals), cone.label() + "*");
        }
    }
    throw std::logic_error("dual: bad kind");
}

double boundary_distance(const ConeModel& cone, const Vec& x) {
    if (!contains(cone, x))
        throw std::invalid_argument("boundary_distance: point is not in the open cone");
    switch (cone.kind()) {
        case ConeKind::Orthant:
            return x.minCoeff();
        case ConeKind::Lorentz: {
            const int n = cone.dim();
            return (x[n - 1] - x.head(n - 1).norm()) / std::sqrt(2.0);
        }
        case ConeKind::Simplicial: {
            // facet normals of A*orthant are the rows of A^{-1}
            const Mat& ainv = cone.matrix_inv();
            Vec u = ainv * x;
            double d = std::numeric_limits<double>::infinity();
            for (int i = 0; i < cone.dim(); ++i)
                d = std::min(d, std::abs(u[i]) / ainv.row(i).norm());
            return d;
        }
        case ConeKind::Product: {
            double d = std::numeric_limits<double>::infinity();
            int off = 0;
            for (const auto& f : cone.factors()) {
                d = std::min(d, boundary_distance(f, x.segment(off, f.dim())));
                off += f.dim();
            }
            return d;
        }
    }
    throw std::logic_error("boundary_distance: bad kind");
}

bool cone_less(const ConeModel& cone, const Vec& x, const Vec& y) {
    check_point(cone, x);
    check_point(cone, y);
    return contains(cone, Vec(y - x));
}

bool in_interval(const ConeModel& cone, const Vec& a, const Vec& b, const Vec& x) {
    return cone_less(cone, a, x) && cone_less(cone, x, b);
}

double Box::volume() const {
    double v = 1.0;
    for (Eigen::Index i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
}

Box interval_box(const ConeModel& cone, const Vec& x) {
    if (!contains(cone, x)) throw std::invalid_argument("interval_box: x is not in the cone");
    Box box;
    box.lo = Vec::Zero(cone.dim());
    box.hi = Vec::Zero(cone.dim());
    switch (cone.kind()) {
        case ConeKind::Orthant:
            box.hi = x;
            return box;
        case ConeKind::Lorentz: {
            // y in <0,x>:  y_n in (0, x_n), and |y_i| bounded by both cone
            // constraints; extremes at y_n = (x_n +- x_i)/2
            const int n = cone.dim();
            for (int i = 0; i < n - 1; ++i) {
                box.lo[i] = -(x[n - 1] - x[i]) / 2.0;
                box.hi[i] = (x[n - 1] + x[i]) / 2.0;
            }
            box.hi[n - 1] = x[n - 1];
            return box;
        }
        case ConeKind::Simplicial: {
            // image of the box (0, A^{-1}x) under A
            const Mat& a = cone.matrix();
            Vec u = cone.matrix_inv() * x;
            for (int i = 0; i < cone.dim(); ++i) {
                double lo = 0.0, hi = 0.0;
                for (int j = 0; j < cone.dim(); ++j) {
                    const double t = a(i, j) * u[j];
                    if (t < 0) lo += t;
                    else hi += t;
                }
                box.lo[i] = lo;
                box.hi[i] = hi;
            }
            return box;
        }
        case ConeKind::Product: {
            int off = 0;
            for (const auto& f : cone.factors()) {
                Box fb = interval_box(f, x.segment(off, f.dim()));
                box.lo.segment(off, f.dim()) = fb.lo;
                box.hi.segment(off, f.dim()) = fb.hi;
                off += f.dim();
            }
            return box;
        }
    }
    throw std::logic_error("interval_box: bad kind");
}

bool ConeModel::same_cone(const ConeModel& other, std::uint64_t seed, int trials) const {
    if (other.dim() != dim_) return false;
    for (int i = 0; i < trials; ++i) {
        auto rng = RngStream::at(seed, 0xC0DE, static_cast<std::uint64_t>(i));
        Vec x(dim_);
        for (int k = 0; k < dim_; ++k) x[k] = rng.normal() * 2.0;
        if (contains(*this, x) != contains(other, x)) return false;
    }
    return true;
}

nlohmann::json ConeModel::to_json() const {
    nlohmann::json j;
    j["dim"] = dim_;
    j["label"] = label_;
    switch (kind_) {
        case ConeKind::Orthant:
            j["kind"] = "orthant";
            break;
        case ConeKind::Lorentz:
            j["kind"] = "lorentz";
            break;
        case ConeKind::Simplicial: {
            j["kind"] = "simplicial";
            nlohmann::json rows = nlohmann::json::array();
            for (int i = 0; i < dim_; ++i) {
                nlohmann::json row = nlohmann::json::array();
                for (int k = 0; k < dim_; ++k) row.push_back(simp_->a(i, k));
                rows.push_back(row);
            }
            j["matrix"] = rows;
            break;
        }
        case ConeKind::Product: {
            j["kind"] = "product";
            nlohmann::json fs = nlohmann::json::array();
            for (const auto& f : *factors_) fs.push_back(f.to_json());
            j["factors"] = fs;
            break;
        }
    }
    return j;
}

ConeModel ConeModel::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const std::string label = j.value("label", "");
    if (kind == "orthant") return orthant(j.at("dim").get<int>(), label);
    if (kind == "lorentz") return lorentz(j.at("dim").get<int>(), label);
    if (kind == "simplicial") {
        const auto& rows = j.at("matrix");
        const int n = static_cast<int>(rows.size());
        Mat a(n, n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n)
                throw std::invalid_argument("cone json: matrix is not square");
            for (int k = 0; k < n; ++k) a(i, k) = rows[i][k].get<double>();
        }
        return simplicial(a, label);
    }
    if (kind == "product") {
        std::vector<ConeModel> fs;
        for (const auto& fj : j.at("factors")) fs.push_back(from_json(fj));
        return product(std::move(fs), label);
    }
    throw std::invalid_argument("cone json: unknown kind '" + kind + "'");
}

}  // namespace conekit
