#pragma once

#include "fcd/flm.hpp"

#include <iosfwd>
#include <string>

namespace fcd {

/**
 * Versioned JSON document ("format": "fcd.flm", "version": 1) holding the
 * means, ρ̂ matrix, spectra, residual matrix and truncation metadata. Only the
 * retained eigenvectors of the covariate spectrum are written; all of its
 * eigenvalues are.
 */
void write_model(const FittedFLM& model, std::ostream& out);
void save_model(const FittedFLM& model, const std::string& path);
FittedFLM read_model(std::istream& in);
FittedFLM load_model(const std::string& path);

}  // namespace fcd
