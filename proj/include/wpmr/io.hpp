#pragma once
// File formats: the binary dataset container (JSON header + little-endian
// complex columns), the self-describing JSON model file, and CSV exports.

#include <json.hpp>
#include <memory>

#include "wpmr/core.hpp"
#include "wpmr/models.hpp"
#include "wpmr/predictors.hpp"

namespace wpmr::io {

using json = nlohmann::json;

std::string fnv1a_hex(std::string_view bytes);
std::string base64_encode(std::span<const unsigned char> bytes);
std::vector<unsigned char> base64_decode(std::string_view text);

std::string encode_complex(std::span<const cplx> values);
std::vector<cplx> decode_complex(std::string_view b64, size_t expect);

struct Dataset {
  ComplexSeries observed;
  std::optional<ComplexSeries> forcing;
  json meta;  // config, seed, lineage (list of content hashes), code info
};

void write_dataset(const std::string& path, const Dataset& ds);
Dataset read_dataset(const std::string& path);

// Plot-ready CSV: header "t,re_u1,im_u1,..." one row per sample.
void write_series_csv(const std::string& path, const ComplexSeries& s);

struct ModelFile {
  CascadeModel model;
  NoiseModel noise;
  json provenance;
};

void write_model(const std::string& path, const ModelFile& mf);
ModelFile read_model(const std::string& path);

// Reconstructs a predictor basis from its identifier; throws on unknown
// ids or versions (fitted weights are invalid across basis versions).
std::unique_ptr<PredictorBasis> basis_from_id(const std::string& id);

// Lineage helpers: every artifact embeds the hashes of everything it was
// derived from; comparisons refuse disjoint lineages unless forced.
std::vector<std::string> lineage_of(const json& meta);
bool lineage_compatible(const json& a, const json& b);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace wpmr::io
