#pragma once

#include <string>

#include "json.hpp"

#include "specunc/spectral_measure.hpp"
#include "specunc/three.hpp"
#include "specunc/uncertainty.hpp"
#include "specunc/weak_metrics.hpp"

namespace specunc::io {

using nlohmann::json;

// Complex numbers are written as [re, im]; readers also accept a bare real.
json to_json(Complex z);
Complex complex_from_json(const json& j);

json to_json(const SpectralMeasure& mu);
SpectralMeasure measure_from_json(const json& j);

json to_json(const CovarianceSequence& c);
CovarianceSequence covariance_from_json(const json& j);

json to_json(const PickData& p);
PickData pick_from_json(const json& j);

json to_json(const TestKernel& g);
TestKernel kernel_from_json(const json& j);

json to_json(const FilterBank& bank);
FilterBank filter_bank_from_json(const json& j);

json to_json(const DiameterReport& r);
json to_json(const TuneResult& r);

/// Parses a JSON file; I/O and syntax problems raise InputError.
json read_file(const std::string& path);
/// Writes `j` followed by a newline; raises InputError when the file
/// cannot be opened.
void write_file(const std::string& path, const json& j);

}  // namespace specunc::io
