#ifndef BOOMID_IO_HPP
#define BOOMID_IO_HPP

#include <map>
#include <string>

#include "boomid/frf.hpp"
#include "boomid/invert.hpp"
#include "boomid/paaa.hpp"
#include "boomid/plant.hpp"
#include "boomid/vecfit.hpp"

namespace boomid {

/// %.17g formatting: lossless for double round trips.
std::string format_double(double x);

/// Write-temp-then-rename. content is written verbatim.
void atomic_write(const std::string& path, const std::string& content);

// TimeSeries: CSV `time_s,value`, one row per sample.
void write_timeseries_csv(const std::string& path, const TimeSeries& ts);
TimeSeries read_timeseries_csv(const std::string& path);

// FrfDataset: CSV `freq_hz,param_n_rms,re,im` (freq outer, param inner)
// plus a JSON sidecar (path + ".json") with meta and the band definition.
void write_frf_dataset(const std::string& csv_path, const FrfDataset& dataset);
FrfDataset read_frf_dataset(const std::string& csv_path);

// Models as JSON, [re, im] pairs for complex arrays.
void write_pole_residue_json(const std::string& path, const PoleResidueModel& model,
                             const std::map<std::string, std::string>& provenance = {});
PoleResidueModel read_pole_residue_json(const std::string& path);

void write_paaa_json(const std::string& path, const ParametricBarycentricModel& model,
                     const std::map<std::string, std::string>& provenance = {});
ParametricBarycentricModel read_paaa_json(const std::string& path);

void write_plant_json(const std::string& path, const ParametricPlant& plant);
ParametricPlant read_plant_json(const std::string& path);

// Cross-validation matrix: long-format CSV `model_param,test_param,e_l2`
// and a JSON summary (path + ".json") with per-model totals.
void write_crossval(const std::string& csv_path, const CrossValMatrix& matrix);
CrossValMatrix read_crossval(const std::string& csv_path);

/// FNV-1a 64 over a string, hex-encoded; used as the config digest that
/// artifact files embed for provenance.
std::string fnv1a_digest(const std::string& content);

} // namespace boomid

#endif
