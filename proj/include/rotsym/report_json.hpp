#pragma once

#include <json.hpp>

#include "rotsym/comparison.hpp"
#include "rotsym/distances.hpp"
#include "rotsym/profiles.hpp"

namespace rotsym {

inline nlohmann::json validation_to_json(const ValidationReport& rep) {
    nlohmann::json j;
    j["valid"] = rep.valid;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : rep.checks)
        j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return j;
}

inline nlohmann::json sample_to_json(const DistortionSample& s) {
    return {{"region", s.region},
            {"coord", s.coord},
            {"direction", s.direction},
            {"ratio", s.ratio}};
}

inline nlohmann::json report_to_json(const DistortionReport& rep) {
    nlohmann::json j;
    j["delta"] = rep.delta;
    j["h_delta"] = rep.h_delta;
    j["lip_bound"] = rep.lip_bound;
    j["depth"] = rep.depth;
    j["max_ratio"] = rep.max_ratio;
    j["min_ratio"] = rep.min_ratio;
    j["certified"] = rep.certified;
    j["worst_sample"] = sample_to_json(rep.worst_sample);
    j["extremes"] = nlohmann::json::array();
    for (const auto& s : rep.extremes) j["extremes"].push_back(sample_to_json(s));
    j["samples_evaluated"] = rep.samples_evaluated;
    return j;
}

inline nlohmann::json bounds_to_json(const DistanceBounds& b) {
    nlohmann::json j;
    j["lip_bound"] = b.lip_bound;
    j["ifd_sorwen"] = b.ifd_sorwen;
    j["ifd_lakzian"] = b.ifd_lakzian;
    j["inputs"] = {{"D1", b.inputs.D1},
                   {"D2", b.inputs.D2},
                   {"V1", b.inputs.V1},
                   {"V2", b.inputs.V2},
                   {"A1", b.inputs.A1},
                   {"A2", b.inputs.A2},
                   {"scale_in", b.inputs.scale_in},
                   {"scale_out", b.inputs.scale_out},
                   {"tube_lip", b.inputs.tube_lip},
                   {"lambda", b.inputs.lambda},
                   {"eps", b.inputs.eps},
                   {"t_gap", b.inputs.t_gap}};
    j["tube_max_ratio_sampled"] = b.tube_max_ratio_sampled;
    j["tube_distortion_bounded"] = b.tube_distortion_bounded;
    return j;
}

} // namespace rotsym
