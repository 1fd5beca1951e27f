#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gbp/system.hpp"

namespace gbp {

/// Ordered strongest to weakest; a stronger class implies the weaker ones.
enum class Classification { StrictDD, DScaledDD, WeaklyDScaledDD, NotWeaklyDD };

std::string to_string(Classification c);
bool at_least(Classification c, Classification floor);

struct SpectralCertificate {
    double rho = 0.0;
    Vector u;  // positive, normalized so the max entry is 1
    /// Set when some u_i fell below 1e-12, i.e. |I - A_d^-1 A| is reducible.
    bool reducible_warning = false;
    /// False when the iteration cap was reached before the tolerance.
    bool converged = true;
    int iterations = 0;
};

struct DominanceReport {
    Vector varrho;
    Classification classification = Classification::NotWeaklyDD;
    std::optional<SpectralCertificate> spectral;
    /// Some dominance inequality sits within 1e-12 of an equality; the
    /// classification is then numerically fragile.
    bool borderline = false;
    std::string diagnostic;
};

/// Record of the constructive rescaling that turns a weakly dominant system
/// into a strictly dominant one.
struct DiagonalizerTrace {
    std::vector<Index> u_set;  // nodes with varrho_i >= 1
    double epsilon = 0.0;
    std::map<Index, double> rho_bar;    // i in U
    std::map<Index, double> rho_breve;  // i not in U
    Scaling d_tilde;
    Vector varrho_tilde;  // recomputed under d_tilde; all entries < 1
};

/// varrho_i = sum_{j != i} |a_ij| d_j / (a_ii d_i); 0 for isolated nodes.
Vector varrho(const SparseSystem& sys, const Scaling& d);

DominanceReport classify(const SparseSystem& sys, const Scaling& d);

/// Perron root and positive eigenvector of |I - A_d^-1 A|, by shifted power
/// iteration run per connected component (max rho wins). rho < 1 certifies
/// generalized diagonal dominance.
SpectralCertificate spectral_certificate(const SparseSystem& sys);

/// Builds a scaling d_tilde with all varrho_i(d_tilde) < 1 from a weakly
/// dominant instance. Throws NotWeaklyDominant otherwise.
DiagonalizerTrace construct_diagonalizer(const SparseSystem& sys, const Scaling& d);

}  // namespace gbp
