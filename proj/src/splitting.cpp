#include "fixsplit/splitting.hpp"

namespace fixsplit {

namespace {

/* closure condition: no nonzero lambda in lat parallel to w with |lambda| <= |w| */
bool periodic_closure(const Lattice& lat, const Vec& w) {
    if (!direction_is_rational(lat, w)) return false;
    Vec lam = parallel_primitive(lat, w);
    return s_cmp(len2(lam), len2(w)) <= 0;
}

} // namespace

ValidationReport validate(const FixSplitting& s) {
    ValidationReport rep;
    try {
        check_same_field(s.w.x, s.w.y);
        for (const Vec* v : {&s.lat1.b1, &s.lat1.b2, &s.lat2.b1, &s.lat2.b2,
                             &s.cyl.lattice.b1, &s.cyl.lattice.b2, &s.cyl.circumference}) {
            check_same_field(s.w.x, v->x);
            check_same_field(s.w.x, v->y);
        }
    } catch (const Error&) {
        rep.violations.push_back("FieldMismatch");
        return rep;
    }
    if (v_is_zero(s.w)) {
        rep.violations.push_back("ZeroSplittingVector");
        return rep;
    }
    if (!v_equal(s.w, s.cyl.circumference) )
        rep.violations.push_back("CircumferenceMismatch");
    bool in_c = in_lattice(s.cyl.lattice, s.cyl.circumference);
    if (!in_c) {
        rep.violations.push_back("CircumferenceNotInLattice");
    } else if (!is_primitive(s.cyl.lattice, s.cyl.circumference)) {
        rep.violations.push_back("CircumferenceNotPrimitive");
    }
    if (periodic_closure(s.lat1, s.w)) rep.violations.push_back("PeriodicClosureT1");
    if (periodic_closure(s.lat2, s.w)) rep.violations.push_back("PeriodicClosureT2");
    /* covolumes are positive by Lattice construction; re-check defensively */
    for (auto [lat, code] : {std::pair{&s.lat1, "DegenerateT1"}, {&s.lat2, "DegenerateT2"},
                             {&s.cyl.lattice, "DegenerateCylinder"}}) {
        if (s_sign(covolume(*lat)) <= 0) rep.violations.push_back(code);
    }
    return rep;
}

const std::vector<std::string>& validation_check_names() {
    static const std::vector<std::string> names = {
        "FieldMismatch",         "ZeroSplittingVector",      "CircumferenceMismatch",
        "CircumferenceNotInLattice", "CircumferenceNotPrimitive", "PeriodicClosureT1",
        "PeriodicClosureT2",     "DegenerateT1",             "DegenerateT2",
        "DegenerateCylinder"};
    return names;
}

bool is_irrational(const FixSplitting& s) {
    ValidationReport rep = validate(s);
    if (!rep.ok()) throw err("InvalidSplitting", "splitting fails validation: " + rep.violations.front());
    return !direction_is_rational(s.lat1, s.w) && !direction_is_rational(s.lat2, s.w);
}

Areas areas(const FixSplitting& s) {
    ValidationReport rep = validate(s);
    if (!rep.ok()) throw err("InvalidSplitting", "splitting fails validation: " + rep.violations.front());
    Areas a{covolume(s.lat1), covolume(s.lat2), covolume(s.cyl.lattice), Scalar{}};
    a.total = s_add(s_add(a.a1, a.a2), s_scale(a.ac, Rat(2)));
    return a;
}

} // namespace fixsplit
