#pragma once

#include "abelquad/quartic.hpp"

namespace abelquad {

// ---------------------------------------------------------------------------
// End-to-end quartic run: flatten, build the differential, cut, integrate,
// and measure. Used by the CLI and the integration tests.
// ---------------------------------------------------------------------------

struct QuarticRunOptions {
    double checker_scale = 8.0;
    int puncture_face = kInvalid;  // closed inputs: face sent to infinity
    bool collect_tears = true;     // report tears instead of throwing
};

struct QuarticRun {
    Mesh domain;  // triangulated working mesh (punctured when closed input)
    ConformalChart chart;
    RationalQuartic rq;       // with points snapped to chart vertices
    CutGraph cut;
    UVAtlas atlas;
    std::vector<double> cone_angle;     // per singular point
    std::vector<double> expected_angle; // (k+4) pi/2
};

/// The triangle mesh the chart parameterizes: the triangulation of the input,
/// minus the punctured face for closed inputs.
inline Mesh chart_domain_mesh(const Mesh& mesh, const ConformalChart& chart)
{
    MetricMesh mm = embedded_metric(mesh);
    if (chart.domain == ConformalChart::Domain::Disk) return mm.tri;
    std::vector<std::vector<int>> faces;
    for (int f = 0; f < mm.tri.n_faces(); ++f) {
        if (f == chart.punctured_face) continue;
        faces.push_back(mm.tri.face_vertices(f));
    }
    return Mesh::from_polygons(mm.tri.positions, faces, mm.tri.has_positions);
}

inline QuarticRun run_quartic(const Mesh& mesh, const RationalQuartic& rq_in,
                              const QuarticRunOptions& opts = {})
{
    QuarticRun run;
    run.chart = conformal_flatten(mesh, opts.puncture_face);
    run.domain = chart_domain_mesh(mesh, run.chart);
    CutGraph pre = singular_cut_graph(run.domain, run.chart, rq_in);

    // evaluate the differential with the singular points moved onto their
    // snapped chart vertices, so branch cuts pass exactly through the cut tree
    run.rq = rq_in;
    {
        size_t i = 0;
        for (auto& [p, n] : run.rq.zeros) p = run.chart.z[pre.snapped[i++]];
        for (auto& [q, mdeg] : run.rq.poles) q = run.chart.z[pre.snapped[i++]];
    }
    run.cut = pre;
    IntegrateOptions io;
    io.collect_tears = opts.collect_tears;
    io.checker_scale = opts.checker_scale;
    run.atlas = integrate_fourth_root(run.domain, run.chart, run.rq, run.cut, io);

    auto pts = run.rq.singular_points();
    for (size_t i = 0; i < pts.size(); ++i) {
        run.cone_angle.push_back(measured_cone_angle(run.domain, run.atlas,
                                                     run.cut.snapped[i]));
        run.expected_angle.push_back((pts[i].second + 4) * kPi / 2.0);
    }
    return run;
}

inline nlohmann::ordered_json quartic_run_to_json(const QuarticRun& run)
{
    nlohmann::ordered_json j;
    j["domain"] = run.chart.domain == ConformalChart::Domain::Disk ? "disk" : "plane";
    j["conformal_residual"] = round_sig(run.chart.conformal_residual);
    if (run.chart.domain == ConformalChart::Domain::Plane)
        j["punctured_face"] = run.chart.punctured_face;
    nlohmann::ordered_json sing = nlohmann::ordered_json::array();
    auto pts = run.rq.singular_points();
    for (size_t i = 0; i < pts.size(); ++i) {
        sing.push_back({{"z", {round_sig(pts[i].first.real()), round_sig(pts[i].first.imag())}},
                        {"order", pts[i].second},
                        {"snapped_vertex", run.cut.snapped[i]},
                        {"snap_distance", round_sig(run.cut.snap_distance[i])},
                        {"cone_angle", round_sig(run.cone_angle[i])},
                        {"expected_angle", round_sig(run.expected_angle[i])}});
    }
    j["singularities"] = std::move(sing);
    j["cut_edges"] = static_cast<int>(run.atlas.cut_edges.size());
    j["branch_tears"] = static_cast<int>(run.atlas.tears.size());
    nlohmann::ordered_json trans = nlohmann::ordered_json::array();
    for (const auto& t : run.atlas.transitions)
        trans.push_back({{"edge", t.edge},
                         {"rotation_k", t.rot_k},
                         {"rotation_error_deg", round_sig(t.rot_err_deg)},
                         {"translation",
                          {round_sig(t.translation.real()), round_sig(t.translation.imag())}},
                         {"translation_error", round_sig(t.translation_err)}});
    j["cut_transitions"] = std::move(trans);
    j["closure_max"] = round_sig(run.atlas.closure_max);
    j["path_defect_max"] = round_sig(run.atlas.path_defect_max);
    return j;
}

} // namespace abelquad
