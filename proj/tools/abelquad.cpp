#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "abelquad/abelquad.hpp"

namespace fs = std::filesystem;
using namespace abelquad;
using nlohmann::ordered_json;

namespace {

void emit(const ordered_json& j, const std::string& out_path)
{
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw IoError("cannot write " + out_path);
        out << text;
    }
}

ordered_json report_json(const Mesh& mesh)
{
    ordered_json j;
    j["vertices"] = mesh.n_vertices();
    j["edges"] = mesh.n_edges();
    j["faces"] = mesh.n_faces();
    j["chi"] = mesh.euler_characteristic();
    j["closed"] = mesh.is_closed();
    if (mesh.is_closed()) j["genus"] = mesh.genus();
    ordered_json hist;
    auto vh = mesh.valence_histogram();
    for (size_t k = 0; k < vh.size(); ++k)
        if (vh[k]) hist[std::to_string(k)] = vh[k];
    j["valence_histogram"] = std::move(hist);
    if (mesh.is_closed() && all_faces_quad(mesh)) {
        Divisor d = divisor_of_quad_mesh(mesh);
        int g = mesh.genus();
        auto gb = gauss_bonnet_report(mesh);
        j["divisor"] = divisor_to_json(d);
        j["divisor_degree"] = d.degree();
        j["expected_degree"] = 8 * g - 8;
        j["degree_ok"] = (d.degree() == 8 * g - 8);
        j["gauss_bonnet"] = {{"lhs", gb.lhs}, {"rhs", gb.rhs}, {"ok", gb.ok}};
    }
    return j;
}

int run_verify_one(const std::string& mesh_path, const std::string& divisor_path,
                   const VerifyOptions& opts, ordered_json& out)
{
    Mesh mesh = load_obj(mesh_path);
    Divisor D;
    if (!divisor_path.empty())
        D = load_divisor(divisor_path);
    else if (mesh.is_closed() && all_faces_quad(mesh))
        D = divisor_of_quad_mesh(mesh);
    else
        throw Error("non-quad input needs an explicit --divisor file");
    VerificationReport rep = verify_abel(mesh, D, opts);
    out = report_to_json(rep);
    out["input"] = mesh_path;
    return rep.verdict ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Abel-Jacobi verification of quad-mesh singularities and construction "
                 "of meromorphic quartic differentials on genus-zero surfaces"};
    app.require_subcommand(1);

    std::string input, out_path, divisor_path, singular_path, batch_dir;
    double tolerance = 1e-3;
    int omega_index = -1;
    double checker_scale = 8.0;
    int puncture_face = -1;

    auto* verify = app.add_subcommand("verify", "check the Abel-Jacobi condition");
    verify->add_option("mesh", input, "closed quad mesh OBJ (or triangle mesh with --divisor)");
    verify->add_option("--divisor", divisor_path, "divisor JSON overriding the valence divisor");
    verify->add_option("--tolerance", tolerance, "integrality tolerance in (0, 0.5)");
    verify->add_option("--omega-index", omega_index,
                       "basis form used as omega_0 (default: automatic)");
    verify->add_option("--batch", batch_dir, "verify every .obj in a directory");
    verify->add_option("--out", out_path, "write the JSON report here instead of stdout");

    auto* quartic = app.add_subcommand("quartic",
                                       "integrate the 4th root of a rational quartic "
                                       "differential into a checkerboard atlas");
    quartic->add_option("mesh", input, "genus-zero OBJ (disk or closed)")->required();
    quartic->add_option("--singular", singular_path, "zeros/poles JSON");
    quartic->add_option("--checker-scale", checker_scale, "texture scale (default 8)");
    quartic->add_option("--puncture-face", puncture_face,
                        "closed inputs: face sent to infinity (default 0)");
    quartic->add_option("--out", out_path, "output OBJ path (default <input>_uv.obj)");

    auto* report = app.add_subcommand("report", "combinatorial and divisor summary");
    report->add_option("mesh", input, "OBJ mesh")->required();
    report->add_option("--out", out_path, "write the JSON report here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(verify)) {
            VerifyOptions opts;
            opts.tolerance = tolerance;
            opts.omega_index = omega_index;
            if (!batch_dir.empty()) {
                std::vector<fs::path> files;
                for (const auto& e : fs::directory_iterator(batch_dir))
                    if (e.path().extension() == ".obj") files.push_back(e.path());
                std::sort(files.begin(), files.end());
                ordered_json results = ordered_json::array();
                int rc = 0;
                for (const auto& f : files) {
                    ordered_json one;
                    rc = std::max(rc, run_verify_one(f.string(), "", opts, one));
                    results.push_back(std::move(one));
                }
                emit(ordered_json{{"results", std::move(results)}}, out_path);
                return rc;
            }
            if (input.empty()) throw Error("verify needs a mesh or --batch directory");
            ordered_json rep;
            int rc = run_verify_one(input, divisor_path, opts, rep);
            emit(rep, out_path);
            return rc;
        }

        if (app.got_subcommand(quartic)) {
            Mesh mesh = load_obj(input);
            bool sphere_mode = mesh.is_closed();
            RationalQuartic rq = singular_path.empty()
                                     ? build_rational_quartic({}, {}, false)
                                     : load_rational_quartic(singular_path, sphere_mode);
            QuarticRunOptions opts;
            opts.checker_scale = checker_scale;
            opts.puncture_face = puncture_face >= 0 ? puncture_face : kInvalid;
            QuarticRun run = run_quartic(mesh, rq, opts);
            std::string obj_out = out_path.empty()
                                      ? fs::path(input).replace_extension().string() + "_uv.obj"
                                      : out_path;
            export_obj_with_uv(run.domain, run.atlas, obj_out, checker_scale);
            ordered_json j = quartic_run_to_json(run);
            j["input"] = input;
            j["output"] = obj_out;
            emit(j, "");
            return run.atlas.tears.empty() ? 0 : 1;
        }

        if (app.got_subcommand(report)) {
            Mesh mesh = load_obj(input);
            ordered_json j = report_json(mesh);
            j["input"] = input;
            emit(j, out_path);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
