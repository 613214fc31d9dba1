#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace spacedmod {

/// Machine-readable violation record. Certificates are data, not
/// exceptions: one run reports every violation it can reach.
struct Certificate {
    std::string code;                    // e.g. "not_finitely_spaced", "lemma6", "cycle"
    std::string detail;                  // human-readable one-liner
    std::vector<std::string> elements;   // involved objects / poset elements
    nlohmann::json witness_handle;       // family handle, when a construction exists
    nlohmann::json data;                 // extra structured payload

    nlohmann::json to_json() const {
        nlohmann::json j{{"code", code}, {"detail", detail}, {"elements", elements}};
        if (code.rfind("lemma", 0) == 0) j["lemma"] = code;
        if (!witness_handle.is_null()) j["witness_handle"] = witness_handle;
        if (!data.is_null()) j["data"] = data;
        return j;
    }
};

}  // namespace spacedmod
