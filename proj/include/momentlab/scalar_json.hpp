#pragma once

/**
 * @file scalar_json.hpp
 * @brief JSON wire format for Scalar.
 *
 * exact -> ["num", "den"]     real -> "d.ddd...e+XX" (all working digits)
 *
 * Reading also accepts plain JSON numbers and "p/q" strings. A real literal is
 * read at max(default precision, digits present in the literal).
 */

#include "momentlab/scalar.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace momentlab::numerics {

inline nlohmann::json scalar_to_json(const Scalar& s) {
    if (s.is_exact()) {
        const Rational& q = s.rational();
        return nlohmann::json::array({q.get_num().get_str(), q.get_den().get_str()});
    }
    return s.real().to_string();
}

inline Scalar scalar_from_string(const std::string& text, int default_digits) {
    return Scalar::parse(text, std::max(default_digits, mantissa_digits(text)));
}

inline Scalar scalar_from_json(const nlohmann::json& j, int default_digits = kDefaultPrecision) {
    if (j.is_array()) {
        if (j.size() != 2) throw std::invalid_argument("exact scalar must be [\"num\", \"den\"]");
        auto part = [](const nlohmann::json& p) {
            if (p.is_string()) return p.get<std::string>();
            if (p.is_number_integer()) return p.dump();
            throw std::invalid_argument("rational parts must be integer strings");
        };
        return Scalar::parse(part(j[0]) + "/" + part(j[1]), default_digits);
    }
    if (j.is_string()) return scalar_from_string(j.get<std::string>(), default_digits);
    if (j.is_number_integer()) return Scalar::parse(j.dump(), default_digits);
    if (j.is_number_float()) return scalar_from_string(j.dump(), default_digits);
    throw std::invalid_argument("not a scalar: " + j.dump());
}

inline nlohmann::json scalars_to_json(const std::vector<Scalar>& xs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& x : xs) out.push_back(scalar_to_json(x));
    return out;
}

inline std::vector<Scalar> scalars_from_json(const nlohmann::json& j, int default_digits = kDefaultPrecision) {
    if (!j.is_array()) throw std::invalid_argument("expected an array of scalars");
    std::vector<Scalar> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(scalar_from_json(e, default_digits));
    return out;
}

/// Parameter lookup with a default, for {"params": {...}} objects.
inline Scalar param_or(const nlohmann::json& params, const char* key, const Scalar& fallback, int digits) {
    if (params.is_object() && params.contains(key)) return scalar_from_json(params.at(key), digits);
    return fallback;
}

inline Scalar param_required(const nlohmann::json& params, const char* key, int digits) {
    if (!params.is_object() || !params.contains(key)) {
        throw std::invalid_argument(std::string("missing parameter '") + key + "'");
    }
    return scalar_from_json(params.at(key), digits);
}

}  // namespace momentlab::numerics
