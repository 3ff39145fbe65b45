#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tokeval {

enum class TaskKind { Binary, Multiclass, Multilabel };
enum class PairMode { None, Cartesian, SharedDisjoint };

PairMode pair_mode_from_name(const std::string& name);
const std::string& pair_mode_name(PairMode mode);
const std::string& task_kind_name(TaskKind kind);

struct TaskInstance {
    std::string text_a;
    std::string text_b;            // empty means absent (single-text task)
    std::vector<uint32_t> labels;  // indices into label_space, sorted unique
};

// Classification dataset. task_kind is inferred at load time: any instance
// with zero or several labels makes the set multilabel; otherwise binary or
// multiclass by label count. label_space keeps first-seen order.
struct TaskDataset {
    std::vector<TaskInstance> instances;
    std::vector<std::string> label_space;
    TaskKind task_kind = TaskKind::Binary;
    PairMode pair_mode = PairMode::None;
    std::string source_name;
};

// TSV with header `text_a<TAB>text_b<TAB>labels`. Newlines, tabs and
// backslashes inside text fields travel escaped (\n, \t, \\); labels are
// comma-separated and an empty field means no labels.
TaskDataset parse_task_tsv(std::string_view text, const std::string& source_name);
TaskDataset load_task_tsv(const std::string& path);
std::string serialize_task_tsv(const TaskDataset& ds);
void save_task_tsv(const TaskDataset& ds, const std::string& path);

// Sets pair_mode after checking it against the data: pair modes need text_b
// on every instance, mode none forbids it.
void set_pair_mode(TaskDataset& ds, PairMode mode);

}  // namespace tokeval
