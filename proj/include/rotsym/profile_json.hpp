#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "rotsym/profiles.hpp"

namespace rotsym {

// Profile file format:
//   { "n": int, "r0": float,
//     "pieces": [ {"kind": "constant",        "m": float,       "r_lo": float, "r_hi": float|null},
//                 {"kind": "fraction_of_max", "epsilon": float, "r_lo": float, "r_hi": float|null},
//                 {"kind": "mollified_join",  "width": float,   "r_lo": float, "r_hi": float|null} ] }
// r_hi = null means +inf.

inline nlohmann::json profile_to_json(const AdmissibleProfile& p) {
    nlohmann::json j;
    j["n"] = p.n();
    j["r0"] = p.r0();
    j["pieces"] = nlohmann::json::array();
    for (const ProfilePiece& pc : p.pieces()) {
        nlohmann::json pj;
        pj["r_lo"] = pc.r_lo;
        if (std::isfinite(pc.r_hi))
            pj["r_hi"] = pc.r_hi;
        else
            pj["r_hi"] = nullptr;
        switch (pc.kind) {
            case PieceKind::Constant:
                pj["kind"] = "constant";
                pj["m"] = pc.value;
                break;
            case PieceKind::FractionOfMax:
                pj["kind"] = "fraction_of_max";
                pj["epsilon"] = pc.epsilon;
                break;
            case PieceKind::MollifiedJoin:
                pj["kind"] = "mollified_join";
                pj["width"] = pc.width;
                break;
        }
        j["pieces"].push_back(pj);
    }
    return j;
}

inline AdmissibleProfile profile_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("r0") || !j.contains("pieces"))
        throw MalformedPieces("profile json: need objects n, r0, pieces");
    const int n = j.at("n").get<int>();
    const double r0 = j.at("r0").get<double>();
    std::vector<ProfilePiece> pieces;
    for (const auto& pj : j.at("pieces")) {
        if (!pj.contains("kind") || !pj.contains("r_lo") || !pj.contains("r_hi"))
            throw MalformedPieces("profile json: piece needs kind, r_lo, r_hi");
        const std::string kind = pj.at("kind").get<std::string>();
        const double r_lo = pj.at("r_lo").get<double>();
        const double r_hi = pj.at("r_hi").is_null() ? kInf : pj.at("r_hi").get<double>();
        if (kind == "constant") {
            if (!pj.contains("m")) throw MalformedPieces("constant piece needs field m");
            pieces.push_back(ProfilePiece::constant(pj.at("m").get<double>(), r_lo, r_hi));
        } else if (kind == "fraction_of_max") {
            if (!pj.contains("epsilon"))
                throw MalformedPieces("fraction_of_max piece needs field epsilon");
            pieces.push_back(
                ProfilePiece::fraction_of_max(pj.at("epsilon").get<double>(), r_lo, r_hi));
        } else if (kind == "mollified_join") {
            if (!pj.contains("width"))
                throw MalformedPieces("mollified_join piece needs field width");
            ProfilePiece p = ProfilePiece::mollified_join(r_lo, r_hi);
            p.width = pj.at("width").get<double>();
            pieces.push_back(p);
        } else {
            throw MalformedPieces("profile json: unknown piece kind '" + kind + "'");
        }
    }
    return AdmissibleProfile(n, r0, std::move(pieces));
}

inline AdmissibleProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile file: " + path);
    nlohmann::json j;
    in >> j; // throws nlohmann::json::parse_error on bad input
    return profile_from_json(j);
}

inline void save_profile(const AdmissibleProfile& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write profile file: " + path);
    out << profile_to_json(p).dump(2) << "\n";
}

} // namespace rotsym
