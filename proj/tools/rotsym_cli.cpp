// rotsym: build rotationally symmetric manifolds with minimal boundary from
// Hawking mass profiles, compare them against appended Schwarzschild model
// spaces, and emit certified distortion and distance-bound reports.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rotsym/comparison.hpp"
#include "rotsym/distances.hpp"
#include "rotsym/geometry.hpp"
#include "rotsym/profile_json.hpp"
#include "rotsym/profiles.hpp"
#include "rotsym/report_json.hpp"
#include "rotsym/schwarzschild.hpp"

namespace {

using nlohmann::json;
using namespace rotsym;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw IoError("cannot write output file: " + out_path);
        f << j.dump(2) << "\n";
    }
}

std::string model_csv_path(std::string path) {
    const auto pos = path.rfind(".csv");
    if (pos != std::string::npos && pos == path.size() - 4)
        return path.substr(0, pos) + ".model.csv";
    return path + ".model";
}

struct CommonOpts {
    double tol = 1e-10;
    double rdelta_exponent = 0.5;
    std::uint64_t seed = 0;
};

int cmd_validate(const std::string& profile_path) {
    const AdmissibleProfile p = load_profile(profile_path);
    const ValidationReport rep = validate_profile(p);
    std::cout << validation_to_json(rep).dump(2) << "\n";
    return rep.valid ? kExitOk : kExitDomain;
}

int cmd_compare(const std::string& profile_path, const CommonOpts& c,
                std::optional<double> A1, std::optional<double> D,
                const std::string& csv_path, const std::string& out_path) {
    const AdmissibleProfile p = load_profile(profile_path);
    const ValidationReport vrep = validate_profile(p);
    if (!vrep.valid) {
        std::cerr << "profile is not admissible:\n"
                  << validation_to_json(vrep).dump(2) << "\n";
        return kExitDomain;
    }
    const Manifold M(p, BuildOptions{0.0, c.tol, 2048});
    const ComparisonSetup C(M, c.rdelta_exponent);
    const DistortionReport rep = C.certify({4096, 64, c.seed});
    json j = report_to_json(rep);
    if (A1 && D) j["bounds"] = bounds_to_json(tube_comparison(C, *A1, *D));
    if (!csv_path.empty()) {
        M.write_embedding_csv(csv_path, C.z_anchor());
        C.model().write_embedding_csv(model_csv_path(csv_path));
    }
    emit(j, out_path);
    return kExitOk;
}

struct SweepRow {
    double delta = 0.0;
    bool ok = false;
    std::string error;
    double depth = 0, lip_bound = 0, ifd_sorwen = 0, ifd_lakzian = 0;
    double D1 = 0, D2 = 0, V1 = 0, V2 = 0, A1 = 0, A2 = 0;
    double max_ratio = 0, min_ratio = 0;
};

SweepRow sweep_row(int n, double A0, double A1, double L, double D, double delta,
                   const CommonOpts& c) {
    SweepRow row;
    row.delta = delta;
    try {
        const Manifold M(deep_well_profile(n, A0, A1, L, delta),
                         BuildOptions{0.0, c.tol, 2048});
        const ComparisonSetup C(M, c.rdelta_exponent);
        const DistortionReport rep = C.certify({4096, 64, c.seed});
        const DistanceBounds b = tube_comparison(C, A1, D);
        row.depth = rep.depth;
        row.lip_bound = rep.lip_bound;
        row.ifd_sorwen = b.ifd_sorwen;
        row.ifd_lakzian = b.ifd_lakzian;
        row.D1 = b.inputs.D1;
        row.D2 = b.inputs.D2;
        row.V1 = b.inputs.V1;
        row.V2 = b.inputs.V2;
        row.A1 = b.inputs.A1;
        row.A2 = b.inputs.A2;
        row.max_ratio = rep.max_ratio;
        row.min_ratio = rep.min_ratio;
        row.ok = true;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

int cmd_sweep(int n, double A0, double A1, double L, double D,
              const std::string& sweep_list, const std::string& csv_path,
              const CommonOpts& c) {
    const std::vector<double> deltas = parse_list(sweep_list);

    std::vector<std::future<SweepRow>> futures;
    futures.reserve(deltas.size());
    for (double d : deltas)
        futures.push_back(std::async(std::launch::async, sweep_row, n, A0, A1, L, D, d, c));

    std::ostringstream os;
    os << "delta,depth,lip_bound,ifd_sorwen,ifd_lakzian,D1,D2,V1,V2,A1,A2,"
          "max_ratio,min_ratio,status\n";
    char buf[512];
    for (auto& f : futures) {
        const SweepRow r = f.get();
        if (r.ok) {
            std::snprintf(buf, sizeof buf,
                          "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                          "%.17g,%.17g,%.17g,ok\n",
                          r.delta, r.depth, r.lip_bound, r.ifd_sorwen, r.ifd_lakzian,
                          r.D1, r.D2, r.V1, r.V2, r.A1, r.A2, r.max_ratio, r.min_ratio);
            os << buf;
        } else {
            std::snprintf(buf, sizeof buf, "%.17g,,,,,,,,,,,,,error: %s\n", r.delta,
                          r.error.c_str());
            os << buf;
        }
    }
    if (csv_path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(csv_path);
        if (!f) throw IoError("cannot write csv file: " + csv_path);
        f << os.str();
    }
    return kExitOk;
}

std::string indexed_path(const std::string& base, std::size_t k, std::size_t total) {
    if (total <= 1) return base;
    const auto pos = base.rfind(".json");
    if (pos != std::string::npos && pos == base.size() - 5)
        return base.substr(0, pos) + "_" + std::to_string(k) + ".json";
    return base + "_" + std::to_string(k);
}

int cmd_example_deep_well(int n, double A0, double A1, double L, double delta,
                          const std::string& out_path, const CommonOpts& c) {
    const AdmissibleProfile p = deep_well_profile(n, A0, A1, L, delta);
    if (!out_path.empty()) save_profile(p, out_path);
    const Manifold M(p, BuildOptions{0.0, c.tol, 2048});
    const ComparisonSetup C(M, c.rdelta_exponent);
    json j;
    j["kind"] = "deep-well";
    j["profile_path"] = out_path;
    j["n"] = n;
    j["epsilon"] = p.pieces()[1].epsilon;
    j["r0"] = p.r0();
    j["adm_mass"] = M.adm_mass();
    j["measured_separation"] = M.sphere_distance(A0, A1);
    j["separation_lower_bound"] =
        p.r0() / std::sqrt(p.pieces()[1].epsilon) *
        (std::pow(1.0 + delta, 1.0 / (n - 2)) - 1.0) /
        std::pow(1.0 - p.pieces()[1].epsilon, 1.0 / (n - 2));
    j["depth"] = C.depth();
    j["lip_bound"] = C.lip_bound();
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_example_sharp_turn(int n, double m0, const std::vector<double>& mjs,
                           const std::vector<double>& slopes,
                           const std::string& out_path, const CommonOpts& c) {
    json summary = json::array();
    for (std::size_t k = 0; k < slopes.size(); ++k) {
        const double mj = mjs[k];
        const AdmissibleProfile p = sharp_turn_profile(n, m0, mj, slopes[k]);
        const std::string path = indexed_path(out_path, k, slopes.size());
        if (!out_path.empty()) save_profile(p, path);
        const Manifold M(p, BuildOptions{0.0, c.tol, 2048});
        const ComparisonSetup C(M, c.rdelta_exponent);
        const DistortionReport rep = C.certify({2048, 16, c.seed});

        // sup |R| over the turn (the join carries the large derivative)
        double supR = 0.0;
        for (const auto& pc : p.pieces()) {
            if (pc.kind != PieceKind::MollifiedJoin) continue;
            for (int i = 1; i < 2000; ++i) {
                const double r = pc.r_lo + (pc.r_hi - pc.r_lo) * i / 2000.0;
                supR = std::max(supR, std::fabs(M.scalar_curvature(r)));
            }
        }
        json j;
        j["kind"] = "sharp-turn";
        j["profile_path"] = path;
        j["slope"] = slopes[k];
        j["m_j"] = mj;
        j["sup_R"] = supR;
        j["max_ratio"] = rep.max_ratio;
        j["lip_bound"] = rep.lip_bound;
        j["depth"] = rep.depth;
        summary.push_back(j);
    }
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotationally symmetric manifolds from Hawking mass profiles"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string profile_path, csv_path, out_path, sweep_list;
    int n = 3;
    double A0 = 0, A1 = 0, L = 0, D = 1.0, delta = 0, m0 = 1.0, mj = 0;
    std::string mj_list, slope_list, example_kind;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--tol", common.tol, "quadrature tolerance (relative)");
        cmd->add_option("--rdelta-exponent", common.rdelta_exponent,
                        "exponent of delta in the definition of r_delta (default 0.5)");
        cmd->add_option("--seed", common.seed, "seed for the certification sampler");
    };

    CLI::App* validate = app.add_subcommand("validate", "check a profile file");
    validate->add_option("--profile", profile_path, "profile json")->required();

    CLI::App* compare =
        app.add_subcommand("compare", "certified comparison against M_Sch(m0, L)");
    compare->add_option("--profile", profile_path, "profile json")->required();
    compare->add_option("--A1", A1, "tube centre sphere area (with --D)");
    compare->add_option("--D", D, "tube radius (with --A1)");
    compare->add_option("--csv", csv_path, "write embedding tables here");
    compare->add_option("--out", out_path, "write the json report here (default stdout)");
    add_common(compare);

    CLI::App* sweep = app.add_subcommand("sweep", "deep-well family sweep over delta");
    sweep->add_option("--sweep", sweep_list, "comma separated list of delta values")
        ->required();
    sweep->add_option("--n", n, "dimension");
    sweep->add_option("--A0", A0, "boundary area")->required();
    sweep->add_option("--A1", A1, "comparison sphere area")->required();
    sweep->add_option("--L", L, "separation target of the deep well")->required();
    sweep->add_option("--D", D, "tube radius");
    sweep->add_option("--csv", csv_path, "write the sweep table here (default stdout)");
    add_common(sweep);

    CLI::App* example = app.add_subcommand("example", "generate a named example family");
    example->add_option("kind", example_kind, "deep-well | sharp-turn")->required();
    example->add_option("--n", n, "dimension");
    example->add_option("--A0", A0, "boundary area (deep-well)");
    example->add_option("--A1", A1, "comparison sphere area (deep-well)");
    example->add_option("--L", L, "separation target (deep-well)");
    example->add_option("--delta", delta, "penrose excess (deep-well)");
    example->add_option("--m0", m0, "boundary mass (sharp-turn)");
    example->add_option("--mj", mj, "first tail mass of the sequence (sharp-turn)");
    example->add_option("--mj-list", mj_list, "explicit tail masses (sharp-turn)");
    example->add_option("--slopes", slope_list,
                        "comma separated slopes of the sharp turns");
    example->add_option("--out", out_path, "profile output path");
    add_common(example);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(profile_path);
        if (compare->parsed()) {
            std::optional<double> a1, d;
            if (compare->count("--A1")) {
                a1 = A1;
                d = D; // default tube radius 1.0 unless --D given
            }
            return cmd_compare(profile_path, common, a1, d, csv_path, out_path);
        }
        if (sweep->parsed()) return cmd_sweep(n, A0, A1, L, D, sweep_list, csv_path, common);
        if (example->parsed()) {
            if (example_kind == "deep-well")
                return cmd_example_deep_well(n, A0, A1, L, delta, out_path, common);
            if (example_kind == "sharp-turn") {
                const std::vector<double> slopes = parse_list(slope_list);
                if (slopes.empty()) {
                    std::cerr << "sharp-turn requires --slopes\n";
                    return kExitUsage;
                }
                std::vector<double> mjs;
                if (!mj_list.empty()) {
                    mjs = parse_list(mj_list);
                    if (mjs.size() != slopes.size()) {
                        std::cerr << "--mj-list must match --slopes in length\n";
                        return kExitUsage;
                    }
                } else {
                    if (!(mj > m0)) {
                        std::cerr << "sharp-turn requires --mj > --m0 (or --mj-list)\n";
                        return kExitUsage;
                    }
                    // tail masses decay towards m0 so the sequence converges
                    for (std::size_t k = 0; k < slopes.size(); ++k)
                        mjs.push_back(m0 + (mj - m0) / ipow(10.0, static_cast<int>(k)));
                }
                return cmd_example_sharp_turn(n, m0, mjs, slopes, out_path, common);
            }
            std::cerr << "unknown example kind: " << example_kind
                      << " (expected deep-well or sharp-turn)\n";
            return kExitUsage;
        }
        return kExitUsage;
    } catch (const MalformedPieces& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "json error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
