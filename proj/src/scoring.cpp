#include "taudit/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "taudit/error.hpp"

namespace taudit {

using nlohmann::json;

void TaskSpec::validate() const {
    if (option_labels.empty()) {
        throw DataError("task has no options");
    }
    const std::set<std::string> uniq(option_labels.begin(), option_labels.end());
    if (uniq.size() != option_labels.size()) {
        throw DataError("task option labels are not distinct");
    }
    for (const auto& k : answer_key) {
        if (!uniq.contains(k)) {
            throw DataError("answer key label `" + k + "` is not an option");
        }
    }
}

bool TaskSpec::has_label(const std::string& label) const {
    return std::find(option_labels.begin(), option_labels.end(), label) != option_labels.end();
}

TaskSpec task_spec_from_json(std::string_view json_text) {
    TaskSpec spec;
    try {
        const json j = json::parse(json_text);
        spec.option_labels = j.at("options").get<std::vector<std::string>>();
        const auto key = j.at("key").get<std::vector<std::string>>();
        spec.answer_key.insert(key.begin(), key.end());
        spec.system_prompt = j.value("system_prompt", std::string{});
        spec.user_prompt = j.value("user_prompt", std::string{});
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid task spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

TaskSpec load_task_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open task spec " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return task_spec_from_json(ss.str());
}

Rational score_response(const std::set<std::string>& selected, const TaskSpec& spec) {
    for (const auto& s : selected) {
        if (!spec.has_label(s)) {
            throw DataError("selected label `" + s + "` is not an option");
        }
    }
    std::int64_t agree = 0;
    for (const auto& label : spec.option_labels) {
        agree += selected.contains(label) == spec.answer_key.contains(label);
    }
    return Rational(agree, static_cast<std::int64_t>(spec.option_labels.size()));
}

namespace {

std::string fold(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

const std::string& canonical_label(std::string_view token, const TaskSpec& spec) {
    const std::string folded = fold(token);
    for (const auto& label : spec.option_labels) {
        if (fold(label) == folded) {
            return label;
        }
    }
    throw DataError("answer label `" + std::string(token) + "` is not an option");
}

// Labels are alphanumeric; anything else separates them.
void add_labels_from_text(std::string_view text, const TaskSpec& spec, std::set<std::string>& out) {
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !std::isalnum(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        if (i > start) {
            out.insert(canonical_label(text.substr(start, i - start), spec));
        }
    }
}

}  // namespace

StructuredAnswer parse_structured(std::string_view raw, const TaskSpec& spec) {
    json j;
    try {
        j = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("response is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw DataError("response JSON is not an object");
    }

    StructuredAnswer ans;
    if (auto it = j.find("solution_path"); it != j.end()) {
        ans.solution_path = it->is_string() ? it->get<std::string>() : it->dump();
    }

    const json* sel = nullptr;
    for (const char* field : {"answer", "selected", "final_answer", "answers"}) {
        if (auto it = j.find(field); it != j.end() && !it->is_null()) {
            sel = &*it;
            break;
        }
    }
    if (sel == nullptr) {
        throw DataError("response has no selection field");
    }
    if (sel->is_string()) {
        add_labels_from_text(sel->get<std::string>(), spec, ans.selected);
    } else if (sel->is_array()) {
        for (const auto& item : *sel) {
            if (!item.is_string()) {
                throw DataError("non-string entry in selection array");
            }
            add_labels_from_text(item.get<std::string>(), spec, ans.selected);
        }
    } else {
        throw DataError("selection field is neither a string nor an array");
    }
    return ans;
}

}  // namespace taudit
