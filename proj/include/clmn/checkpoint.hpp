#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "clmn/optim.hpp"
#include "clmn/tensor.hpp"

namespace clmn {

inline constexpr int kCheckpointFormatVersion = 1;

/// Checkpoints are a pair of files sharing a stem: `<stem>.json` holds the
/// manifest (format version, parameter names/shapes/byte offsets, optional
/// extras) and `<stem>.bin` is a flat little-endian float64 blob.
struct LoadedCheckpoint {
    nlohmann::ordered_json manifest;
    std::vector<ParamSet::Entry> params;
};

void save_checkpoint(const std::string& stem, const ParamSet& params,
                     const nlohmann::ordered_json& extras = {});

LoadedCheckpoint load_checkpoint(const std::string& stem);

/// Copies loaded values into an existing set; every destination parameter
/// must be present with a matching shape.
void assign_checkpoint(const LoadedCheckpoint& loaded, ParamSet& params);

}  // namespace clmn
