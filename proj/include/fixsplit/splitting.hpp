#pragma once
#include <string>
#include <vector>
#include "fixsplit/planar.hpp"

namespace fixsplit {

/* Marked cylinder class: the lattice Lambda_c with its distinguished
   primitive circumference element (the splitting vector w). */
struct CylinderClass {
    Lattice lattice;
    Vec circumference;
};

/* Two slit tori (Lambda_1, Lambda_2) sharing a doubled cylinder class and
   the common boundary holonomy w. */
struct FixSplitting {
    Lattice lat1, lat2;
    CylinderClass cyl;
    Vec w;
};

struct ValidationReport {
    std::vector<std::string> violations;   // stable condition codes
    bool ok() const { return violations.empty(); }
};

/* Checks every typed invariant; reports all violations, never throws. */
ValidationReport validate(const FixSplitting& s);

/* The stable condition codes validate can emit, in check order (for
   exhaustive pass/fail reports). */
const std::vector<std::string>& validation_check_names();

/* The w-direction is minimal (non-periodic) on both tori.
   Throws InvalidSplitting when validate fails. */
bool is_irrational(const FixSplitting& s);

struct Areas {
    Scalar a1, a2, ac, total;   // total = a1 + a2 + 2 ac
};
Areas areas(const FixSplitting& s);   // throws InvalidSplitting

} // namespace fixsplit
