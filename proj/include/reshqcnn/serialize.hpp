#pragma once

// On-disk formats: dataset and checkpoint JSON, trace CSV.
//
// Complex matrices are stored row-major as arrays of [re, im] pairs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "reshqcnn/graphdata.hpp"
#include "reshqcnn/netcore.hpp"
#include "reshqcnn/trainer.hpp"

namespace reshqcnn {

using Json = nlohmann::json;

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);
Json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j);

/// {spec, seed, delta, m0, states, V, supervised_indices}.
Json dataset_to_json(const GraphDataset& ds);
/// Rebuilds targets from V and the inputs; throws on malformed documents.
GraphDataset dataset_from_json(const Json& j);

/// {arch, seed, layers}; `extra` fields are merged in at top level.
Json checkpoint_to_json(const Architecture& arch, std::uint64_t seed, const LayerUnitaries& u,
                        const Json& extra = Json::object());
LayerUnitaries checkpoint_unitaries(const Json& j, Architecture* arch_out = nullptr);

/// Header plus one row per epoch: epoch,c_sv,c_g,c_full,c_test,wall_ms.
std::string trace_to_csv(const TrainingTrace& trace);

struct TraceRow {
  int epoch = 0;
  double c_sv = 0.0;
  double c_g = 0.0;
  double c_full = 0.0;
  double c_test = 0.0;
  double wall_ms = 0.0;
};
/// Throws std::runtime_error on a malformed header or row.
std::vector<TraceRow> parse_trace_csv(std::string_view text);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string content_digest(std::string_view bytes);

std::string read_file(const std::filesystem::path& p);
/// Truncates and writes, creating parent directories.
void write_file(const std::filesystem::path& p, std::string_view contents);

}  // namespace reshqcnn
