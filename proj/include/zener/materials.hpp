#pragma once

#include "zener/types.hpp"

#include <map>
#include <vector>

namespace zener {

/// Isotropic Hooke law C tau = 2 mu tau + lambda tr(tau) I.
struct IsotropicLaw {
    double mu = 0.0;
    double lambda = 0.0;
    /// Set once the plane-stress reduction has been applied.
    bool plane_stress_reduced = false;
};

/// Lame parameters from Young's modulus and Poisson ratio.
/// Throws MaterialError unless E > 0 and -1 < nu < 0.5.
IsotropicLaw lame_from_young_poisson(double young, double poisson);

/// lambda -> 2 lambda mu / (lambda + 2 mu). A second application is a no-op.
IsotropicLaw plane_stress_adjust(const IsotropicLaw& law);

Mat3 apply_hooke(const IsotropicLaw& law, const Mat3& tau, int dim);

/// Inverse of apply_hooke. Throws MaterialError if 2 mu + d lambda <= 0
/// or mu <= 0.
Mat3 apply_compliance(const IsotropicLaw& law, const Mat3& tau, int dim);

/// Throws MaterialError unless mu > 0 and d lambda + 2 mu > 0.
void validate_law(const IsotropicLaw& law, int dim, const char* what = "law");

struct MaterialRegion {
    IsotropicLaw law_C;
    IsotropicLaw law_D;
    double rho = 1.0;
    double omega = 1.0;
    bool plane_stress = false;
};

/// Checks rho > 0, omega > 0, C positive definite and D - C positive definite.
void validate_region(const MaterialRegion& region, int dim);

/// The law (mu_D - mu_C, lambda_D - lambda_C); its compliance is V = (D - C)^{-1}.
/// Throws MaterialError if D - C is not positive definite.
IsotropicLaw visco_compliance_law(const MaterialRegion& region, int dim);

/// Region tag -> material. Plane stress reduction is applied to C and D of
/// flagged regions when the map is built for a 2D problem.
class MaterialMap {
public:
    MaterialMap() = default;
    MaterialMap(std::map<int, MaterialRegion> regions, int dim);

    int dim() const { return dim_; }
    const MaterialRegion& at(int region) const;
    const IsotropicLaw& law_C(int region) const { return at(region).law_C; }
    const IsotropicLaw& law_D(int region) const { return at(region).law_D; }
    /// Law whose compliance is V for the region.
    const IsotropicLaw& law_V(int region) const;
    double rho(int region) const { return at(region).rho; }
    double omega(int region) const { return at(region).omega; }
    const std::map<int, MaterialRegion>& regions() const { return regions_; }

    /// Throws ConfigError naming the first mesh region without an entry.
    void check_covers(const std::vector<int>& mesh_regions) const;

private:
    int dim_ = 2;
    std::map<int, MaterialRegion> regions_;
    std::map<int, IsotropicLaw> v_laws_;
};

/// One region with tag 1.
MaterialMap uniform_materials(const MaterialRegion& region, int dim);

} // namespace zener
