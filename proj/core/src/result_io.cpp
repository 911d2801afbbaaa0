#include <nlohmann/json.hpp>
#include <ostream>

#include "pathhd/error.hpp"
#include "pathhd/retriever.hpp"

namespace pathhd {

using nlohmann::json;

void write_result(std::ostream& out, const RetrievalResult& result) {
    json candidates = json::array();
    for (const auto& c : result.candidates) {
        candidates.push_back({{"schema", c.path.schema.relations},
                              {"chain", c.path.entity_chain},
                              {"sim", c.sim},
                              {"idf_bonus", c.idf_bonus},
                              {"length_penalty", c.length_penalty},
                              {"total", c.total}});
    }
    const json record = {{"question_id", result.question_id},
                         {"plan", result.plan.relations},
                         {"candidates", std::move(candidates)},
                         {"top_k", result.top_k},
                         {"timings_us",
                          {{"plan", result.timings.plan_us},
                           {"instantiate", result.timings.instantiate_us},
                           {"encode", result.timings.encode_us},
                           {"score", result.timings.score_us},
                           {"select", result.timings.select_us}}}};
    out << record.dump() << '\n';
}

RetrievalResult parse_result(std::string_view line) {
    RetrievalResult r;
    try {
        const json obj = json::parse(line);
        r.question_id = obj.at("question_id").get<std::string>();
        r.plan.relations = obj.at("plan").get<std::vector<std::string>>();
        for (const auto& c : obj.at("candidates")) {
            ScoredCandidate sc;
            sc.path.schema.relations = c.at("schema").get<std::vector<std::string>>();
            sc.path.entity_chain = c.at("chain").get<std::vector<std::string>>();
            sc.sim = c.at("sim").get<double>();
            sc.idf_bonus = c.at("idf_bonus").get<double>();
            sc.length_penalty = c.at("length_penalty").get<double>();
            sc.total = c.at("total").get<double>();
            r.candidates.push_back(std::move(sc));
        }
        r.top_k = obj.at("top_k").get<std::vector<std::size_t>>();
        const auto& t = obj.at("timings_us");
        r.timings.plan_us = t.at("plan").get<std::int64_t>();
        r.timings.instantiate_us = t.value("instantiate", std::int64_t{0});
        r.timings.encode_us = t.at("encode").get<std::int64_t>();
        r.timings.score_us = t.at("score").get<std::int64_t>();
        r.timings.select_us = t.at("select").get<std::int64_t>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("retrieval record: ") + e.what(), 0);
    }
    return r;
}

}  // namespace pathhd
