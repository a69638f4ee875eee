#pragma once

/**
 * @file moment_sequence.hpp
 * @brief A finite sequence prefix with a uniform scalar kind and a provenance record.
 */

#include "momentlab/scalar.hpp"
#include "momentlab/scalar_json.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentlab {

class MomentSequence {
public:
    MomentSequence() = default;

    /// Values are promoted to a single kind; `offset` is the paper-style index of values[0].
    explicit MomentSequence(std::vector<Scalar> values, nlohmann::json provenance = nullptr, std::size_t offset = 0)
        : values_(numerics::unify_kind(std::move(values))), provenance_(std::move(provenance)), offset_(offset) {}

    const std::vector<Scalar>& values() const { return values_; }
    std::span<const Scalar> span() const { return values_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    const Scalar& operator[](std::size_t i) const { return values_[i]; }
    const Scalar& at(std::size_t i) const {
        if (i >= values_.size()) {
            throw std::out_of_range("sequence index " + std::to_string(i) + " beyond length " +
                                    std::to_string(values_.size()));
        }
        return values_[i];
    }

    bool is_exact() const { return values_.empty() || values_.front().is_exact(); }

    /// 0 for exact sequences.
    int precision() const { return values_.empty() ? 0 : values_.front().precision(); }

    const nlohmann::json& provenance() const { return provenance_; }
    std::size_t offset() const { return offset_; }

    MomentSequence with_provenance(nlohmann::json provenance) const {
        MomentSequence out = *this;
        out.provenance_ = std::move(provenance);
        return out;
    }

    /// First `count` entries.
    MomentSequence prefix(std::size_t count) const {
        if (count > values_.size()) {
            throw std::invalid_argument("prefix of " + std::to_string(count) + " entries from a sequence of " +
                                        std::to_string(values_.size()));
        }
        return MomentSequence(std::vector<Scalar>(values_.begin(), values_.begin() + static_cast<long>(count)),
                              provenance_, offset_);
    }

private:
    std::vector<Scalar> values_;
    nlohmann::json provenance_;
    std::size_t offset_ = 0;
};

/// {"values": [...], "provenance": ..., "offset": n}
inline nlohmann::json sequence_to_json(const MomentSequence& s) {
    nlohmann::json j = {{"values", numerics::scalars_to_json(s.values())}};
    if (!s.provenance().is_null()) j["provenance"] = s.provenance();
    if (s.offset() != 0) j["offset"] = s.offset();
    return j;
}

/// Accepts a bare array, a sequence object, or any object carrying one under "sequence".
inline MomentSequence sequence_from_json(const nlohmann::json& j, int digits = kDefaultPrecision) {
    if (j.is_array()) return MomentSequence(numerics::scalars_from_json(j, digits));
    if (j.is_object()) {
        if (j.contains("values")) {
            nlohmann::json prov = j.contains("provenance") ? j.at("provenance") : nlohmann::json(nullptr);
            std::size_t offset = j.contains("offset") ? j.at("offset").get<std::size_t>() : 0;
            return MomentSequence(numerics::scalars_from_json(j.at("values"), digits), std::move(prov), offset);
        }
        if (j.contains("sequence")) return sequence_from_json(j.at("sequence"), digits);
    }
    throw std::invalid_argument("not a sequence: expected an array or an object with \"values\"");
}

}  // namespace momentlab
