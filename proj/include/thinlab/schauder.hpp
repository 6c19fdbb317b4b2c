#pragma once

#include "thinlab/norms.hpp"
#include "thinlab/norms1d.hpp"
#include "thinlab/solver.hpp"

namespace thinlab {

struct SchauderReport {
    HolderReport local;  ///< over x <= 2/3
    HolderReport global;
    HolderReport phi;
    double local_ratio = 0.0;
    double global_ratio = 0.0;
};

/// Empirical Schauder constant: discrete C^{2,gamma} norm of u over the left two
/// thirds and globally, against the C^{2,gamma} norm of the boundary data.
inline SchauderReport local_schauder_check(const DiscreteSolution& u, const BVPSpec& spec, int phi_samples = 2049)
{
    SchauderReport r;
    const double gamma = spec.coefficients.gamma;
    const auto nodes = nodes_of(u);
    r.global = holder_norm_2d(nodes, 2, gamma);
    r.local = holder_norm_2d(u, 2, gamma, 0.0, 0.0, 2.0 / 3.0);
    r.phi = holder_norm_1d(Sampled1D::sample(spec.phi, 0.0, 1.0, phi_samples), 2, gamma);
    if (r.phi.value > 0.0) {
        r.local_ratio = r.local.value / r.phi.value;
        r.global_ratio = r.global.value / r.phi.value;
    }
    return r;
}

} // namespace thinlab
