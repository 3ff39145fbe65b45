#include "tokeval/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "tokeval/errors.hpp"

namespace tokeval {

namespace {

nlohmann::ordered_json to_json_value(const Report::Value& value) {
    return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, value);
}

}  // namespace

void Report::add_config(std::string key, Value value) {
    config_.emplace_back(std::move(key), std::move(value));
}

void Report::add(std::string key, Value value) {
    results_.emplace_back(std::move(key), std::move(value));
}

void Report::set_table(std::vector<std::string> columns,
                       std::vector<std::vector<std::string>> rows) {
    columns_ = std::move(columns);
    rows_ = std::move(rows);
}

std::string Report::format_value(const Value& value) {
    if (const auto* s = std::get_if<std::string>(&value)) return *s;
    if (const auto* i = std::get_if<int64_t>(&value)) return std::to_string(*i);
    if (const auto* u = std::get_if<uint64_t>(&value)) return std::to_string(*u);
    if (const auto* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
    const double d = std::get<double>(value);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

std::string Report::to_tsv() const {
    std::string out;
    if (columns_.empty()) {
        out += "key\tvalue\n";
        for (const auto& [k, v] : config_) out += "config." + k + "\t" + format_value(v) + "\n";
        for (const auto& [k, v] : results_) out += k + "\t" + format_value(v) + "\n";
        return out;
    }
    for (const auto& [k, v] : config_) out += "# config." + k + "=" + format_value(v) + "\n";
    for (const auto& [k, v] : results_) out += "# " + k + "=" + format_value(v) + "\n";
    for (size_t i = 0; i < columns_.size(); ++i) {
        if (i > 0) out.push_back('\t');
        out += columns_[i];
    }
    out.push_back('\n');
    for (const auto& row : rows_) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out.push_back('\t');
            out += row[i];
        }
        out.push_back('\n');
    }
    return out;
}

std::string Report::to_json() const {
    nlohmann::ordered_json j;
    auto& config = j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config_) config[k] = to_json_value(v);
    auto& results = j["results"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : results_) results[k] = to_json_value(v);
    if (!columns_.empty()) {
        auto& table = j["table"] = nlohmann::ordered_json::object();
        table["columns"] = columns_;
        table["rows"] = rows_;
    }
    return j.dump(2) + "\n";
}

void Report::write_files(const std::string& prefix) const {
    for (const auto& [suffix, content] :
         {std::pair<std::string, std::string>{".tsv", to_tsv()}, {".json", to_json()}}) {
        const std::string path = prefix + suffix;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot open " + path + " for writing");
        out << content;
        if (!out) throw DataError("failed writing " + path);
    }
}

}  // namespace tokeval
