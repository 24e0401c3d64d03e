#pragma once
#include <map>
#include <string>
#include <vector>
#include "fixsplit/twist.hpp"

namespace fixsplit {

/* Directed boundary segment of a chart, material on the left. Crossing it at
   point x continues in chart `target` at x + tau; `twin` is the segment that
   represents the same identification seen from the other side. */
struct ModelEdge {
    int chart = 0;
    Vec p, q;               // exact chart-local endpoints
    int target = 0;
    Vec tau;                // exact transition translation
    int twin = -1;
    std::string name;
};

/* Parallelogram chart origin + [0,1] span1 + [0,1] span2 (slits are edges). */
struct ModelChart {
    std::string region_tag;
    Vec origin, span1, span2;
    Scalar area;            // exact |span1 x span2|
};

/* Corner sector at the endpoint q of one directed edge: spans counterclockwise
   from the next edge's outgoing angle a_out to this edge's incoming angle a_in. */
struct ModelWedge {
    int cls = -1;           // vertex identification class
    int chart = 0;
    double qx = 0, qy = 0;
    double a_out = 0, a_in = 0, width = 0;
};

struct VertexClass {
    double angle = 0;       // total cone angle
    int wedges = 0;
    bool singular = false;  // |angle - 2pi| > 1e-9
};

struct SingularPoint {
    int chart = 0;
    double x = 0, y = 0;
    int cls = -1;
};

/* Flat polygon complex: charts, translation identifications, and the vertex
   classes discovered by walking corner wedges around each identified point. */
struct PolygonModel {
    ScalarMode mode;
    std::vector<ModelChart> charts;
    std::vector<ModelEdge> edges;
    std::vector<ModelWedge> wedges;         // one per edge, at its q endpoint
    std::vector<VertexClass> classes;
    std::vector<SingularPoint> singular_points;
    Scalar total_area;

    /* float tables derived for tracing */
    struct FloatEdge {
        int chart, target, twin;
        double px, py, dx, dy, taux, tauy;
    };
    struct FloatChart {
        double ox, oy, e1x, e1y, e2x, e2y, area;
    };
    std::vector<FloatEdge> fedges;
    std::vector<FloatChart> fcharts;
    std::vector<std::vector<int>> chart_edges;   // edge indices per chart
};

/* Audits the pairing (exact involution, segments congruent under tau), builds
   the float tables, and computes wedges / vertex classes / singular points.
   Builders call it last; exposed for hand-built fixtures. Throws
   GuaranteeViolated on any structural defect. */
void finalize_model(PolygonModel& m);

/* Concrete flat model of a valid splitting: tori as reduced-basis
   parallelograms slit from the origin along w (wrapped into the fundamental
   domain), cylinders as (w, transversal) parallelograms, banks glued
   C1.bottom = T1 right bank, C1.top = T2 left bank, C2 crosswise. The built
   complex must show exactly two cone points of angle 6pi and exact total area;
   anything else throws GuaranteeViolated. Throws InvalidSplitting /
   SlitWrapsThroughVertex (degenerate layout) / ModelTooLarge (slit wraps more
   than 20000 times through a fundamental domain). */
PolygonModel build_model(const FixSplitting& s);

/* Unit square torus cut into left/right half charts; no singular points.
   Float-mode fixture for tracer tests. */
PolygonModel make_square_torus_fixture();

enum class Termination { SingularityHit, Closed, HorizonReached };

struct TraceOptions {
    double snap = 1e-9;          // singularity / closure tolerance, flat units
    long max_steps = 2000000;
    bool detect_closure = true;
    bool record_path = false;    // keep (time, chart, x, y) breakpoints
};

struct TracePoint {
    double t;
    int chart;
    double x, y;
};

struct TraceResult {
    double elapsed = 0;
    std::map<std::string, double> occupancy;   // region_tag -> time
    Termination termination = Termination::HorizonReached;
    long crossings = 0;
    int hit_class = -1;                        // SingularityHit
    int hit_chart = -1;
    double hit_x = 0, hit_y = 0;
    double period = 0;                         // Closed
    int end_chart = 0;                         // state at stop
    double end_x = 0, end_y = 0;
    std::vector<TracePoint> path;
};

/* Straight-line flow from chart-local (x, y) in direction dir (normalized
   internally) until a singular point is met within snap, the trajectory passes
   through its start again, or the horizon elapses. Throws ZeroDirection /
   StartAtSingularity / NumericalStall. */
TraceResult trace(const PolygonModel& m, int chart, double x, double y,
                  double dir_x, double dir_y, double horizon,
                  const TraceOptions& opt = {});

/* Empirical counterpart of the same-side criterion: from every singular class,
   some corner wedge strictly containing direction w^k must flow into a
   singularity at flat length |w^k| (within max(1e-8, 1e-12 |w^k|)). k = 0
   trivially true. Precondition same_side(s, plan, k); violations throw
   SameSideViolated. opt supplies snap and the step budget (long twisted
   holonomies need max_steps of a few crossings per flat unit); closure
   detection is always off here. */
bool check_saddle_realization(const PolygonModel& m, const FixSplitting& s,
                              const TwistPlan& plan, const TraceOptions& opt = {});

struct OccupancySample {
    int chart = 0;
    double x = 0, y = 0;
    double elapsed = 0, fraction = 0;
    Termination termination = Termination::HorizonReached;
};

/* Occupancy fraction of one region along `samples` quasi-random starts
   (deterministic low-discrepancy sequence offset by seed) vs its area
   fraction; diagnostic only. Traces run concurrently, results ordered by
   sample index. */
struct OccupancySummary {
    std::string focus_tag;
    double area_fraction = 0;
    double mean = 0, lo = 0, hi = 0;
    double dir_x = 0, dir_y = 0;
    double horizon = 0;
    long seed = 0;
    std::vector<OccupancySample> rows;
};

OccupancySummary occupancy_experiment(const PolygonModel& m, double dir_x,
                                      double dir_y, double horizon, int samples,
                                      long seed = 0, const TraceOptions& opt = {},
                                      const std::string& focus_tag = "");

} // namespace fixsplit
