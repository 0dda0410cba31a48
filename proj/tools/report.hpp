#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace rangewalk::cli {

using json = nlohmann::ordered_json;

enum ExitCode { kPass = 0, kPropertyFailure = 1, kUsageError = 2, kResourceExceeded = 3 };

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    json to_json() const;
    void write_csv(std::ostream& out) const;
};

/// Settings shared by every command.
struct GlobalOptions {
    std::uint64_t seed = 1;
    bool seed_given = false;
    int threads = 0;
    bool exact = false;
    bool floating = false;
    std::string out_dir;
    std::string format = "json";
};

struct Report {
    std::string name;     ///< file stem under --out
    json config;          ///< resolved command configuration
    json body;
    std::vector<Table> tables;
    std::string summary;  ///< plain text, one or more lines
    int exit_code = kPass;
};

/// Writes a report (with its manifest) and returns the exit code.
/// With --out, files go to the directory and the summary to stdout; without
/// it, the report goes to stdout in --format and the summary to stderr.
int emit(Report report, const GlobalOptions& global, const std::string& command_line,
         std::chrono::system_clock::time_point started);

std::string iso_timestamp(std::chrono::system_clock::time_point t);

}  // namespace rangewalk::cli
