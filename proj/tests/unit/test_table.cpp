#include <doctest.h>

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "fixture_files.hpp"
#include "pathhd/error.hpp"
#include "pathhd/table.hpp"

using namespace pathhd;

namespace {

Table sample() {
    Table t({{"family", ColumnType::Text},
             {"d", ColumnType::Integer},
             {"rate", ColumnType::Probability},
             {"fit", ColumnType::Real, true}});
    t.add_row({std::string("bipolar"), std::int64_t{512}, 0.025, 0.5});
    t.add_row({std::string("bipolar"), std::int64_t{2048}, 0.0, std::numeric_limits<double>::quiet_NaN()});
    t.set_meta("seed", std::int64_t{7});
    t.set_meta("epsilon", 0.1);
    return t;
}

}  // namespace

TEST_CASE("tsv layout") {
    std::ostringstream out;
    sample().write_tsv(out);
    CHECK(out.str() == "family\td\trate\tfit\nbipolar\t512\t0.025\t0.5\nbipolar\t2048\t0\tNA\n");
}

TEST_CASE("validation rejects bad cells") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    auto bad_row = [](std::vector<Cell> row) {
        Table t({{"family", ColumnType::Text},
                 {"d", ColumnType::Integer},
                 {"rate", ColumnType::Probability},
                 {"fit", ColumnType::Real}});
        t.add_row(std::move(row));
        return t;
    };
    CHECK_THROWS_AS(bad_row({std::string("x"), std::int64_t{1}, 1.5, 0.0}).validate(), ConfigError);
    CHECK_THROWS_AS(bad_row({std::string("x"), std::int64_t{1}, -0.1, 0.0}).validate(), ConfigError);
    CHECK_THROWS_AS(bad_row({std::string("x"), std::int64_t{1}, 0.5, nan}).validate(), ConfigError);
    CHECK_THROWS_AS(bad_row({std::string("x"), std::int64_t{1}, 0.5, inf}).validate(), ConfigError);
    CHECK_THROWS_AS(bad_row({std::string("a\tb"), std::int64_t{1}, 0.5, 0.0}).validate(), ConfigError);
    CHECK_THROWS_AS(bad_row({std::int64_t{3}, std::int64_t{1}, 0.5, 0.0}).validate(), ConfigError);
    CHECK_THROWS_AS(bad_row({std::string("x"), 1.0, 0.5, 0.0}).validate(), ConfigError);
    CHECK_NOTHROW(bad_row({std::string("x"), std::int64_t{1}, 1.0, -3.0}).validate());

    Table t({{"a", ColumnType::Real}});
    CHECK_THROWS_AS(t.add_row({1.0, 2.0}), ConfigError);
    CHECK_THROWS_AS(Table({{"a", ColumnType::Real}, {"a", ColumnType::Real}}), ConfigError);
}

TEST_CASE("accessors") {
    const auto t = sample();
    CHECK(t.real(0, "d") == 512.0);
    CHECK(t.real(0, "rate") == 0.025);
    CHECK(std::get<std::string>(t.at(1, "family")) == "bipolar");
    CHECK_THROWS_AS(t.real(0, "family"), ConfigError);
    CHECK_THROWS_AS(t.at(0, "missing"), ConfigError);
}

TEST_CASE("written tables never overwrite") {
    testing_support::TempDir dir;
    const auto t = sample();
    const auto a = write_table(dir.path(), "tail", t);
    const auto b = write_table(dir.path(), "tail", t);
    CHECK(a.tsv != b.tsv);
    CHECK(std::filesystem::exists(a.tsv));
    CHECK(std::filesystem::exists(b.sidecar));
    CHECK(a.tsv.filename().string().rfind("tail_", 0) == 0);
    CHECK(a.tsv.extension() == ".tsv");

    const auto side = nlohmann::json::parse(testing_support::read_bytes(a.sidecar));
    CHECK(side["experiment"] == "tail");
    CHECK(side["rows"] == 2);
    CHECK(side["columns"].size() == 4);
    CHECK(side["columns"][2]["type"] == "probability");
    CHECK(side["meta"]["seed"] == 7);
    CHECK(side["meta"]["epsilon"] == 0.1);

    Table bad({{"p", ColumnType::Probability}});
    bad.add_row({2.0});
    CHECK_THROWS_AS(write_table(dir.path(), "bad", bad), ConfigError);
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++files;
    CHECK(files == 4);
}
