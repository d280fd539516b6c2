#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace conekit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kDetEps = 1e-10;      // singularity guard on |det A|
inline constexpr double kClosureEps = 1e-12;  // tolerance for closure membership

enum class ConeKind { Orthant, Lorentz, Simplicial, Product };

// A concrete open convex cone in R^n.  Immutable value type; cheap to copy
// (shared internals), safe to share across threads.
class ConeModel {
public:
    static ConeModel orthant(int n, std::string label = "");
    static ConeModel lorentz(int n, std::string label = "");
    // image A * orthant(n); A must be regular
    static ConeModel simplicial(const Mat& a, std::string label = "");
    static ConeModel product(std::vector<ConeModel> factors, std::string label = "");

    ConeKind kind() const { return kind_; }
    int dim() const { return dim_; }
    const std::string& label() const { return label_; }

    const Mat& matrix() const;          // simplicial A
    const Mat& matrix_inv() const;      // cached A^{-1}
    double abs_det() const;             // |det A|
    const std::vector<ConeModel>& factors() const;

    // a unit vector well inside the cone (used as sampler axis and solver start)
    Vec axis() const;

    nlohmann::json to_json() const;
    static ConeModel from_json(const nlohmann::json& j);

    // membership agreement on sampled points; structural equality is not
    // well-defined for simplicial models (A vs AP)
    bool same_cone(const ConeModel& other, std::uint64_t seed = 1234,
                   int trials = 1000) const;

private:
    ConeModel() = default;
    struct Simplicial {
        Mat a, a_inv;
        double abs_det = 0;
    };
    ConeKind kind_ = ConeKind::Orthant;
    int dim_ = 0;
    std::string label_;
    std::shared_ptr<const Simplicial> simp_;
    std::shared_ptr<const std::vector<ConeModel>> factors_;
};

void check_point(const ConeModel& cone, const Vec& x);  // dim + finiteness

bool contains(const ConeModel& cone, const Vec& x);
ConeModel dual(const ConeModel& cone);
double boundary_distance(const ConeModel& cone, const Vec& x);
bool cone_less(const ConeModel& cone, const Vec& x, const Vec& y);
bool in_interval(const ConeModel& cone, const Vec& a, const Vec& b, const Vec& x);

// axis-aligned bounding box of the cone interval <0, x>
struct Box {
    Vec lo, hi;
    double volume() const;
};
Box interval_box(const ConeModel& cone, const Vec& x);

}  // namespace conekit
