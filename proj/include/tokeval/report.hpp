#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace tokeval {

// Ordered key-value report with an optional table, emitted as both TSV and
// JSON. Numeric formatting is deterministic, so identical inputs produce
// byte-identical files.
class Report {
  public:
    using Value = std::variant<std::string, int64_t, uint64_t, double, bool>;

    void add_config(std::string key, Value value);
    void add(std::string key, Value value);
    void set_table(std::vector<std::string> columns,
                   std::vector<std::vector<std::string>> rows);

    // Key-value reports: a two-column `key<TAB>value` sheet, config keys
    // prefixed with `config.`. Table reports: config as `# key=value`
    // comment lines, then the table with a header row.
    std::string to_tsv() const;
    std::string to_json() const;  // {"config": {...}, "results": {...}, "table": {...}}

    // Writes prefix.tsv and prefix.json.
    void write_files(const std::string& prefix) const;

    static std::string format_value(const Value& value);

  private:
    std::vector<std::pair<std::string, Value>> config_;
    std::vector<std::pair<std::string, Value>> results_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace tokeval
