#pragma once

#include "xinflate/classifiers.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace xinflate {

/// JSON model documents ("format": "xinflate-model", "version": 1). See
/// docs in README.md for the schema. Schema violations raise ParseError
/// whose where() is a JSON pointer; semantic problems (a split outside its
/// domain, non-monotone weights) raise ValidationError.
Model parse_model(std::string_view text);
std::string dump_model(const Model& m);

Model load_model(const std::filesystem::path& path);
void save_model(const Model& m, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace xinflate
