#pragma once

// JSON spec files for structures and immersions (see docs/file-formats.md).

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "gkv/zoo.hpp"

namespace gkv {

// `params` override parameters declared in the document; unknown names
// raise SpecFileError.
std::shared_ptr<const FStructure> structure_from_json(const nlohmann::json& doc,
                                                      const ParamTable& params = {});
std::shared_ptr<const Immersion> immersion_from_json(const nlohmann::json& doc,
                                                     const ParamTable& params = {});

// A document with a "map" member is an immersion, otherwise a structure.
Target target_from_json(const nlohmann::json& doc, const ParamTable& params = {});
Target load_target_file(const std::string& path, const ParamTable& params = {});

// Zoo name first, then a path to a spec file.
Target resolve_target(const std::string& name_or_path, const ParamTable& params = {});

}  // namespace gkv
