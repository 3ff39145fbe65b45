#include "tokeval/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "tokeval/errors.hpp"
#include "tokeval/unicode.hpp"

namespace tokeval {

namespace {

const std::string kHeader = "text_a\ttext_b\tlabels";

std::string escape_field(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (const char ch : s) {
        switch (ch) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\\': out += "\\\\"; break;
            default: out.push_back(ch);
        }
    }
    return out;
}

std::string unescape_field(std::string_view s, size_t line_no) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out.push_back(s[i]);
            continue;
        }
        if (i + 1 >= s.size()) {
            throw DataError("line " + std::to_string(line_no) + ": dangling backslash");
        }
        switch (s[++i]) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case '\\': out.push_back('\\'); break;
            default:
                throw DataError("line " + std::to_string(line_no) + ": unknown escape \\" +
                                std::string(1, s[i]));
        }
    }
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    size_t start = 0;
    while (true) {
        const size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

PairMode pair_mode_from_name(const std::string& name) {
    if (name == "none") return PairMode::None;
    if (name == "cartesian") return PairMode::Cartesian;
    if (name == "shared_disjoint") return PairMode::SharedDisjoint;
    throw UsageError("unknown pair mode: " + name +
                     " (expected none, cartesian or shared_disjoint)");
}

const std::string& pair_mode_name(PairMode mode) {
    static const std::string names[] = {"none", "cartesian", "shared_disjoint"};
    return names[static_cast<int>(mode)];
}

const std::string& task_kind_name(TaskKind kind) {
    static const std::string names[] = {"binary", "multiclass", "multilabel"};
    return names[static_cast<int>(kind)];
}

TaskDataset parse_task_tsv(std::string_view text, const std::string& source_name) {
    TaskDataset ds;
    ds.source_name = source_name;

    std::vector<std::string_view> lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();  // trailing newline
    if (lines.empty()) throw DataError(source_name + ": missing header line");
    if (lines[0] != kHeader) {
        throw DataError(source_name + ": first line must be the header `" + kHeader + "`");
    }

    std::unordered_map<std::string, uint32_t> label_index;
    bool any_multi = false;
    for (size_t ln = 1; ln < lines.size(); ++ln) {
        const size_t line_no = ln + 1;
        const auto fields = split(lines[ln], '\t');
        if (fields.size() != 3) {
            throw DataError(source_name + ": line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected 3");
        }
        TaskInstance inst;
        inst.text_a = unescape_field(fields[0], line_no);
        inst.text_b = unescape_field(fields[1], line_no);
        for (const std::string& t : {inst.text_a, inst.text_b}) {
            if (!is_valid_utf8(t)) {
                throw DataError(source_name + ": line " + std::to_string(line_no) +
                                " contains invalid UTF-8");
            }
        }
        if (!fields[2].empty()) {
            for (const std::string_view raw : split(fields[2], ',')) {
                if (raw.empty()) {
                    throw DataError(source_name + ": line " + std::to_string(line_no) +
                                    " has an empty label name");
                }
                const std::string name(raw);
                auto [it, inserted] =
                    label_index.emplace(name, static_cast<uint32_t>(ds.label_space.size()));
                if (inserted) ds.label_space.push_back(name);
                if (std::find(inst.labels.begin(), inst.labels.end(), it->second) !=
                    inst.labels.end()) {
                    throw DataError(source_name + ": line " + std::to_string(line_no) +
                                    " repeats label `" + name + "`");
                }
                inst.labels.push_back(it->second);
            }
        }
        if (inst.labels.size() != 1) any_multi = true;
        std::sort(inst.labels.begin(), inst.labels.end());
        ds.instances.push_back(std::move(inst));
    }

    if (any_multi) {
        ds.task_kind = TaskKind::Multilabel;
    } else {
        ds.task_kind = ds.label_space.size() > 2 ? TaskKind::Multiclass : TaskKind::Binary;
    }
    return ds;
}

TaskDataset load_task_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_task_tsv(buf.str(), path);
}

std::string serialize_task_tsv(const TaskDataset& ds) {
    std::string out = kHeader + "\n";
    for (const TaskInstance& inst : ds.instances) {
        out += escape_field(inst.text_a);
        out.push_back('\t');
        out += escape_field(inst.text_b);
        out.push_back('\t');
        for (size_t i = 0; i < inst.labels.size(); ++i) {
            if (i > 0) out.push_back(',');
            out += ds.label_space.at(inst.labels[i]);
        }
        out.push_back('\n');
    }
    return out;
}

void save_task_tsv(const TaskDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << serialize_task_tsv(ds);
    if (!out) throw DataError("failed writing " + path);
}

void set_pair_mode(TaskDataset& ds, PairMode mode) {
    size_t with_b = 0;
    for (const TaskInstance& inst : ds.instances) {
        if (!inst.text_b.empty()) ++with_b;
    }
    if (mode != PairMode::None && with_b != ds.instances.size()) {
        throw DataError("pair mode `" + pair_mode_name(mode) + "` requires text_b on every "
                        "instance; " + std::to_string(ds.instances.size() - with_b) +
                        " instance(s) lack it");
    }
    if (mode == PairMode::None && with_b > 0) {
        throw DataError("dataset has pair texts on " + std::to_string(with_b) +
                        " instance(s); pass --pair-mode cartesian or shared_disjoint");
    }
    ds.pair_mode = mode;
}

}  // namespace tokeval
