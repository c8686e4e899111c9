#ifndef IFL_CATALOG_DATA_H_
#define IFL_CATALOG_DATA_H_

#include <string_view>
#include <vector>

// Data files compiled into the binary (see cmake/embed_catalog.cmake).
namespace ifl::catalog_data {

// data/server_presets.json
std::string_view ServerPresets();
// data/catalog/*.json, sorted by file name.
std::vector<std::string_view> ScenarioSources();

}  // namespace ifl::catalog_data

#endif  // IFL_CATALOG_DATA_H_
