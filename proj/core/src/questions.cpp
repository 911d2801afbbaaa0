#include "pathhd/questions.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>

#include "pathhd/error.hpp"

namespace pathhd {

namespace {

using nlohmann::json;

std::string required_string(const json& obj, const char* field, std::size_t lineno) {
    const auto it = obj.find(field);
    if (it == obj.end()) throw ParseError(std::string("missing mandatory field '") + field + "'", lineno);
    if (!it->is_string()) throw ParseError(std::string("field '") + field + "' must be a string", lineno);
    return it->get<std::string>();
}

std::optional<std::vector<std::string>> optional_strings(const json& obj, const char* field, std::size_t lineno) {
    const auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_array()) throw ParseError(std::string("field '") + field + "' must be an array", lineno);
    std::vector<std::string> out;
    for (const auto& v : *it) {
        if (!v.is_string()) throw ParseError(std::string("field '") + field + "' must hold strings", lineno);
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

std::vector<Question> load_questions(std::istream& in, const Graph* graph) {
    std::vector<Question> out;
    std::set<std::string> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
        }
        if (!obj.is_object()) throw ParseError("record is not a JSON object", lineno);
        Question q;
        q.id = required_string(obj, "id", lineno);
        q.text = required_string(obj, "text", lineno);
        q.topic_entity = required_string(obj, "topic_entity", lineno);
        q.gold_answers = optional_strings(obj, "gold_answers", lineno);
        if (auto schema = optional_strings(obj, "gold_schema", lineno)) q.gold_schema = Schema{std::move(*schema)};
        if (!ids.insert(q.id).second) throw ParseError("duplicate question id '" + q.id + "'", lineno);
        if (graph && !graph->contains_entity(q.topic_entity)) {
            throw ParseError("unknown topic entity '" + q.topic_entity + "'", lineno);
        }
        out.push_back(std::move(q));
    }
    if (in.bad()) throw IoError("read failure while loading questions");
    return out;
}

std::vector<Question> load_questions_file(const std::filesystem::path& path, const Graph* graph) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open questions file '" + path.string() + "'");
    return load_questions(in, graph);
}

void write_question(std::ostream& out, const Question& q) {
    json obj = {{"id", q.id}, {"text", q.text}, {"topic_entity", q.topic_entity}};
    if (q.gold_answers) obj["gold_answers"] = *q.gold_answers;
    if (q.gold_schema) obj["gold_schema"] = q.gold_schema->relations;
    out << obj.dump() << '\n';
}

std::size_t IdfTable::freq(const Schema& s) const {
    const auto it = freq_.find(s.key());
    return it == freq_.end() ? 0 : it->second;
}

double IdfTable::value(std::size_t n_train, std::size_t freq) {
    return std::log(1.0 + static_cast<double>(n_train) / (1.0 + static_cast<double>(freq)));
}

IdfTable compute_idf(const std::vector<Question>& questions,
                     const std::map<std::string, std::vector<Schema>>& candidate_sets) {
    std::set<std::string_view> ids;
    for (const auto& q : questions) ids.insert(q.id);
    std::map<std::string, std::size_t> freq;
    for (const auto& [qid, schemas] : candidate_sets) {
        if (!ids.contains(qid)) throw ConfigError("candidate set for unknown question id '" + qid + "'");
        std::set<std::string> distinct;
        for (const auto& s : schemas) distinct.insert(s.key());
        for (const auto& k : distinct) ++freq[k];
    }
    return IdfTable(questions.size(), std::move(freq));
}

}  // namespace pathhd
