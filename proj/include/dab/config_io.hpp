#pragma once

// Parameter-file loading and saving. The format is plain `key = value`
// lines with '#' comments; keys are the ConverterParams field names.
// Loading starts from the built-in defaults and overrides whatever the
// file mentions; unknown keys are an error.

#include <filesystem>
#include <string>

#include "dab/params.hpp"

namespace dab {

ConverterParams load_params(const std::filesystem::path& file);
void save_params(const ConverterParams& p, const std::filesystem::path& file);

/// Parse from an already-read string (used by load_params and tests).
ConverterParams parse_params(const std::string& text, const std::string& origin = "<string>");

} // namespace dab
