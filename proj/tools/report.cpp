#include "report.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#ifndef RANGEWALK_VERSION
#define RANGEWALK_VERSION "unknown"
#endif

namespace rangewalk::cli {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

json Table::to_json() const {
    json rows_json = json::array();
    for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) obj[columns[i]] = row[i];
        rows_json.push_back(std::move(obj));
    }
    return rows_json;
}

void Table::write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_field(columns[i]);
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
        out << '\n';
    }
}

std::string iso_timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int emit(Report report, const GlobalOptions& global, const std::string& command_line,
         std::chrono::system_clock::time_point started) {
    namespace fs = std::filesystem;
    json outputs = json::array();
    std::vector<std::pair<fs::path, const Table*>> csv_files;
    fs::path json_path;
    if (!global.out_dir.empty()) {
        fs::create_directories(global.out_dir);
        json_path = fs::path(global.out_dir) / (report.name + ".json");
        outputs.push_back(json_path.string());
        for (const auto& t : report.tables) {
            fs::path p = fs::path(global.out_dir) / (report.name + (t.name.empty() ? "" : "_" + t.name) + ".csv");
            outputs.push_back(p.string());
            csv_files.emplace_back(p, &t);
        }
    }

    json manifest = json::object();
    manifest["command"] = command_line;
    manifest["config"] = report.config;
    manifest["seed"] = report.config.contains("seed") ? report.config["seed"] : json(global.seed);
    manifest["threads"] = global.threads;
    manifest["version"] = RANGEWALK_VERSION;
    manifest["started"] = iso_timestamp(started);
    manifest["finished"] = iso_timestamp(std::chrono::system_clock::now());
    manifest["outputs"] = outputs;

    json doc = json::object();
    doc["manifest"] = manifest;
    doc["exit_code"] = report.exit_code;
    for (auto& [k, v] : report.body.items()) doc[k] = v;
    for (const auto& t : report.tables) doc[t.name.empty() ? "rows" : t.name] = t.to_json();

    if (!global.out_dir.empty()) {
        std::ofstream(json_path) << doc.dump(2) << '\n';
        for (const auto& [p, t] : csv_files) {
            std::ofstream out(p);
            t->write_csv(out);
        }
        std::cout << report.summary;
    } else {
        std::cerr << report.summary;
        if (global.format == "csv" && !report.tables.empty()) {
            report.tables.front().write_csv(std::cout);
        } else if (global.format == "csv") {
            Table kv{"", {"key", "value"}, {}};
            for (auto& [k, v] : report.body.items())
                if (v.is_primitive()) kv.add({k, v.is_string() ? v.get<std::string>() : v.dump()});
            kv.write_csv(std::cout);
        } else {
            std::cout << doc.dump(2) << '\n';
        }
    }
    return report.exit_code;
}

}  // namespace rangewalk::cli
