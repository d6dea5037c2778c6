#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "taudit/rational.hpp"

namespace taudit {

/// A multiple-choice task with its answer key and the fixed prompts.
struct TaskSpec {
    std::vector<std::string> option_labels;  // ordered, distinct, non-empty
    std::set<std::string> answer_key;        // subset of option_labels
    std::string system_prompt;
    std::string user_prompt;

    /// Throws DataError when the invariants do not hold.
    void validate() const;
    bool has_label(const std::string& label) const;
};

/// Reads `{"options": [...], "key": [...], "system_prompt": ..., "user_prompt": ...}`.
TaskSpec load_task_spec(const std::filesystem::path& path);
TaskSpec task_spec_from_json(std::string_view json_text);

struct StructuredAnswer {
    std::string solution_path;
    std::set<std::string> selected;
};

/// Option-wise score: fraction of options whose selection state agrees with
/// the key. Throws DataError for labels outside the option set.
Rational score_response(const std::set<std::string>& selected, const TaskSpec& spec);

/// Parses the model's JSON object. The selection may be an array of labels or
/// a single string such as "B, D"; labels are trimmed and matched
/// case-insensitively. Throws DataError (a parse failure) on malformed JSON,
/// a missing selection field or an unknown label.
StructuredAnswer parse_structured(std::string_view raw, const TaskSpec& spec);

}  // namespace taudit
