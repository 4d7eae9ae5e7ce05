#include "zener/materials.hpp"

#include "zener/symtensor.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace zener {

IsotropicLaw lame_from_young_poisson(double young, double poisson)
{
    if (!(young > 0.0))
        throw MaterialError("Young's modulus must be positive");
    if (!(poisson > -1.0 && poisson < 0.5))
        throw MaterialError("Poisson ratio must lie in (-1, 0.5); 0.5 is the incompressible limit");
    IsotropicLaw law;
    law.mu = young / (2.0 * (1.0 + poisson));
    law.lambda = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
    return law;
}

IsotropicLaw plane_stress_adjust(const IsotropicLaw& law)
{
    if (law.plane_stress_reduced)
        return law;
    IsotropicLaw out = law;
    out.lambda = 2.0 * law.lambda * law.mu / (law.lambda + 2.0 * law.mu);
    out.plane_stress_reduced = true;
    return out;
}

Mat3 apply_hooke(const IsotropicLaw& law, const Mat3& tau, int dim)
{
    return 2.0 * law.mu * tau + law.lambda * tau.trace() * identity_d(dim);
}

Mat3 apply_compliance(const IsotropicLaw& law, const Mat3& tau, int dim)
{
    const double bulk = 2.0 * law.mu + dim * law.lambda;
    if (!(law.mu > 0.0) || !(bulk > 0.0))
        throw MaterialError("singular law: compliance requires mu > 0 and 2 mu + d lambda > 0");
    return (tau - (law.lambda / bulk) * tau.trace() * identity_d(dim)) / (2.0 * law.mu);
}

void validate_law(const IsotropicLaw& law, int dim, const char* what)
{
    if (!(law.mu > 0.0) || !(dim * law.lambda + 2.0 * law.mu > 0.0)) {
        std::ostringstream os;
        os << what << " is not positive definite (mu = " << law.mu << ", lambda = " << law.lambda << ")";
        throw MaterialError(os.str());
    }
}

IsotropicLaw visco_compliance_law(const MaterialRegion& region, int dim)
{
    IsotropicLaw v;
    v.mu = region.law_D.mu - region.law_C.mu;
    v.lambda = region.law_D.lambda - region.law_C.lambda;
    if (!(v.mu > 0.0) || !(dim * v.lambda + 2.0 * v.mu > 0.0)) {
        std::ostringstream os;
        os << "D - C must be positive definite for the model to be dissipative (mu_D - mu_C = " << v.mu
           << ", lambda_D - lambda_C = " << v.lambda << ")";
        throw MaterialError(os.str());
    }
    return v;
}

void validate_region(const MaterialRegion& region, int dim)
{
    if (!(region.rho > 0.0))
        throw MaterialError("density must be positive");
    if (!(region.omega > 0.0))
        throw MaterialError("relaxation time must be positive");
    if (region.plane_stress && dim != 2)
        throw MaterialError("plane stress is only meaningful in 2D");
    validate_law(region.law_C, dim, "C");
    validate_law(region.law_D, dim, "D");
    visco_compliance_law(region, dim);
}

MaterialMap::MaterialMap(std::map<int, MaterialRegion> regions, int dim) : dim_(dim), regions_(std::move(regions))
{
    if (regions_.empty())
        throw MaterialError("material map is empty");
    for (auto& [tag, r] : regions_) {
        if (r.plane_stress && dim == 2) {
            r.law_C = plane_stress_adjust(r.law_C);
            r.law_D = plane_stress_adjust(r.law_D);
        }
        try {
            validate_region(r, dim);
        } catch (const MaterialError& e) {
            throw MaterialError("region " + std::to_string(tag) + ": " + e.what());
        }
        v_laws_[tag] = visco_compliance_law(r, dim);
    }
}

const MaterialRegion& MaterialMap::at(int region) const
{
    auto it = regions_.find(region);
    if (it == regions_.end())
        throw ConfigError("no material defined for region " + std::to_string(region));
    return it->second;
}

const IsotropicLaw& MaterialMap::law_V(int region) const
{
    auto it = v_laws_.find(region);
    if (it == v_laws_.end())
        throw ConfigError("no material defined for region " + std::to_string(region));
    return it->second;
}

void MaterialMap::check_covers(const std::vector<int>& mesh_regions) const
{
    for (int r : std::set<int>(mesh_regions.begin(), mesh_regions.end()))
        if (!regions_.count(r))
            throw ConfigError("mesh region " + std::to_string(r) + " has no material entry");
}

MaterialMap uniform_materials(const MaterialRegion& region, int dim)
{
    return MaterialMap({{1, region}}, dim);
}

} // namespace zener
