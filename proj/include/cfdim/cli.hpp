#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>

namespace cfdim {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
    // decompose | pressure | geometry-gaps | measure-check | classify | dim-f | ebc | luczak | nested-ratio | verify-suite
    std::string command;
    std::map<std::string, std::string> params;
    std::string out_path;    // artifact file (JSON, or CSV for geometry-gaps); empty = stdout only
    std::string cache_path;  // empty = CFDIM_CACHE or no cache
    unsigned threads = 1;
    std::uint64_t budget = std::uint64_t{1} << 26;
};

// key=value lines; '#' comments. Keys already present in cfg.params win.
void merge_config_file(RunConfig& cfg, const std::string& path);

// Runs the criteria battery; returns the number of failed criteria.
using SuiteRunner = std::function<int(std::ostream& out)>;

// Exit status: 0 ok, 2 domain/configuration, 3 resource, 4 invariant violation.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err, const SuiteRunner& suite = {});

} // namespace cfdim
