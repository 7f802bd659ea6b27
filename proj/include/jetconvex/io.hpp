// SPDX-License-Identifier: Apache-2.0
//
// Versioned JSON file formats (jet datasets, extension models) and CSV
// helpers. All errors surface as std::runtime_error with a message naming
// the offending field.

#pragma once

#include "jetconvex/envelope.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace jetconvex {

struct JetFile {
    std::size_t dim = 0;
    std::vector<JetPoint> records;
};

JetFile readJetFile(const std::string& path);
void writeJetFile(const std::string& path, std::size_t dim,
                  const std::vector<JetPoint>& records);

/// True when the JSON document at path is a model file rather than a jet
/// file (kind == "jetconvex-model").
bool isModelFile(const std::string& path);

void saveModel(const ExtensionModel& model, const std::string& path);

/// Rebuilds the runtime model: dataset and slacks are recomputed from the
/// stored records (deterministic), the modulus, candidates, cached upper
/// values, box, and config are taken from the file. Cached values are
/// cross-checked against recomputation at 1e-9 * dataScale.
ExtensionModel loadModel(const std::string& path);

/// Query rows of d comma-separated coordinates; a non-numeric first row is
/// treated as a header and skipped.
std::vector<std::vector<double>> readQueriesCsv(const std::string& path, std::size_t dim);

} // namespace jetconvex
