#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "eigenshape/analysis.hpp"
#include "eigenshape/curve.hpp"
#include "eigenshape/mesh.hpp"
#include "eigenshape/optim.hpp"

namespace eigenshape {

using Json = nlohmann::ordered_json;

/// {"a0": number, "a": [...], "b": [...]}; missing "a" or "b" means no modes.
Json to_json(const FourierBoundary& fb);
FourierBoundary shape_from_json(const Json& j);

/// Keys mirror the OptimConfig members; "K" is accepted for "modes". A run
/// manifest is accepted too, in which case its "config" member is used.
Json to_json(const OptimConfig& cfg);
OptimConfig config_from_json(const Json& j);

Json to_json(const TriangleMesh& m);
Json to_json(const QualitativeReport& rep);

/// Header iter,J,P,lambda2,gap,step,gradnorm (lambda1 for lambda1 runs).
std::string trace_csv(const OptimTrace& trace, Objective objective = Objective::lambda2);

/// Parses a file; syntax errors become InputError with line and column.
Json read_json(const std::filesystem::path& path);
FourierBoundary read_shape(const std::filesystem::path& path);
OptimConfig read_config(const std::filesystem::path& path);

/// Writes text verbatim (binary mode, so output is byte-stable across runs).
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

struct RunManifest {
    std::string command;
    Json config = Json::object();
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
};

Json to_json(const RunManifest& m);

/// Library, Eigen and compiler versions.
Json version_info();

}  // namespace eigenshape
