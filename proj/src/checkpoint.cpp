#include "clmn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "clmn/errors.hpp"

namespace clmn {

namespace {

void append_le64(std::string& out, double value) {
    auto bits = std::bit_cast<std::uint64_t>(value);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

double read_le64(const std::string& blob, std::size_t offset) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(blob[offset + i]))
                << (8 * i);
    return std::bit_cast<double>(bits);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    return content;
}

}  // namespace

void save_checkpoint(const std::string& stem, const ParamSet& params,
                     const nlohmann::ordered_json& extras) {
    nlohmann::ordered_json manifest;
    manifest["format_version"] = kCheckpointFormatVersion;
    auto entries = nlohmann::ordered_json::array();
    std::string blob;
    for (const auto& entry : params.items()) {
        nlohmann::ordered_json rec;
        rec["name"] = entry.name;
        rec["shape"] = entry.tensor->shape;
        rec["offset"] = blob.size();
        entries.push_back(std::move(rec));
        for (double v : entry.tensor->data) append_le64(blob, v);
    }
    manifest["params"] = std::move(entries);
    if (!extras.is_null() && !extras.empty())
        for (const auto& [key, value] : extras.items()) manifest[key] = value;

    std::ofstream mout(stem + ".json", std::ios::binary);
    if (!mout) throw ParseError("cannot write " + stem + ".json");
    mout << manifest.dump(2) << "\n";
    std::ofstream bout(stem + ".bin", std::ios::binary);
    if (!bout) throw ParseError("cannot write " + stem + ".bin");
    bout.write(blob.data(), static_cast<std::streamsize>(blob.size()));
}

LoadedCheckpoint load_checkpoint(const std::string& stem) {
    LoadedCheckpoint out;
    try {
        out.manifest = nlohmann::ordered_json::parse(read_file(stem + ".json"));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("checkpoint manifest " + stem + ".json: " + e.what());
    }
    if (!out.manifest.contains("format_version") ||
        out.manifest["format_version"].get<int>() != kCheckpointFormatVersion)
        throw ParseError("checkpoint " + stem + ": unsupported format version");
    const std::string blob = read_file(stem + ".bin");
    for (const auto& rec : out.manifest.at("params")) {
        const std::string name = rec.at("name").get<std::string>();
        const auto shape = rec.at("shape").get<std::vector<std::size_t>>();
        const auto offset = rec.at("offset").get<std::size_t>();
        std::size_t count = 1;
        for (std::size_t extent : shape) count *= extent;
        if (offset + 8 * count > blob.size())
            throw ParseError("checkpoint " + stem + ": blob truncated at parameter '" +
                             name + "'");
        std::vector<double> values(count);
        for (std::size_t i = 0; i < count; ++i) values[i] = read_le64(blob, offset + 8 * i);
        out.params.push_back({name, Tensor::create(shape, std::move(values))});
    }
    return out;
}

void assign_checkpoint(const LoadedCheckpoint& loaded, ParamSet& params) {
    std::unordered_map<std::string, const TensorPtr*> by_name;
    for (const auto& entry : loaded.params) by_name[entry.name] = &entry.tensor;
    for (const auto& entry : params.items()) {
        auto it = by_name.find(entry.name);
        if (it == by_name.end())
            throw ParseError("checkpoint missing parameter '" + entry.name + "'");
        const Tensor& src = **it->second;
        if (src.shape != entry.tensor->shape)
            throw ParseError("checkpoint shape mismatch for parameter '" + entry.name + "'");
        entry.tensor->data = src.data;
    }
}

}  // namespace clmn
