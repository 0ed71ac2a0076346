#pragma once

// Sampled audit of the standing assumptions a problem must satisfy before the
// convergence certificates mean anything. A failing assumption is a report
// row with a witness sample, never an exception.
//
// Limsup-style conditions are probed on geometric ladders; "pass" means every
// sample is finite and the tail of the ladder looks convergent (monotone
// within slack, or geometrically decaying increments). That is the strongest
// falsifiable proxy for a statement about a limit.

#include <span>
#include <string>
#include <vector>

#include "hj1d/hamiltonian.hpp"
#include "hj1d/potential.hpp"

namespace hj1d {

struct Interval {
    double lo = 0.0, hi = 0.0;
    double length() const { return hi - lo; }
};

struct AuditCheck {
    std::string id;           // stable row key, e.g. "A1"
    std::string description;  // what the row verifies
    bool pass = false;
    double statistic = 0.0;  // worst-case sampled quantity
    double witness_x = 0.0;  // sample attaining the statistic
    double witness_y = 0.0;
    double witness_r = 0.0;  // ladder value (energy, momentum or threshold)
    std::string note;
};

struct AssumptionReport {
    std::vector<AuditCheck> checks;
    bool all_pass = true;
    const AuditCheck* find(const std::string& id) const;
};

// Probe sequence verdict for a limsup-type condition sampled along a
// decreasing ladder.
struct LadderProbe {
    double sup = 0.0;
    int argmax = 0;
    bool converged = false;
};
LadderProbe probe_ladder(std::span<const double> samples);

AssumptionReport audit_assumptions(const Hamiltonian& H, const Potential& V, Interval I,
                                   std::span<const double> r_grid = {});

}  // namespace hj1d
