#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <json.hpp>

#include "moact/serialize.hpp"
#include "support/test_util.hpp"

using namespace moact;
using namespace moact::testutil;

TEST_CASE("float formatting is plain and locale independent", "[serialize]") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(3.5) == "3.5");
    CHECK(format_double(1.0 / 0.0) == "inf");
    CHECK(format_double(-1.0 / 0.0) == "-inf");
    CHECK(format_double(42.25).find(',') == std::string::npos);
}

TEST_CASE("percentages are truncated, never rounded", "[serialize]") {
    CHECK(format_percent(8, 11, 1.0) == "72.72%");   // 72.7272... cut at two digits
    CHECK(format_percent(2, 3, 1.0) == "66.66%");    // not 66.67
    CHECK(format_percent(1, 1, 1.0) == "100.00%");
    CHECK(format_percent(0, 5, 1.0) == "0.00%");
    CHECK(format_percent(9, 13, 1.0) == "69.23%");
    CHECK(format_percent(0, 0, 1.0) == "100.00%");
    CHECK(format_percent(0, 0, 0.0) == "0.00%");
}

TEST_CASE("motion field serialization carries every block", "[serialize]") {
    Frame frame = random_frame(0, 32, 32, 3);
    auto spec = BlockGridSpec::fit(32, 32, 16, 2);
    auto field = exhaustive_search(frame, frame, spec);

    nlohmann::json j = field;
    CHECK(j["spec"]["block_size"] == 16);
    CHECK(j["spec"]["rows"] == 2);
    REQUIRE(j["blocks"].size() == 4);
    CHECK(j["blocks"][0]["i"] == 0);
    CHECK(j["blocks"][0]["x"] == 0);
    CHECK(j["blocks"][0]["sad"] == 0);
    CHECK(j["blocks"][3]["j"] == 1);

    std::ostringstream csv;
    write_motion_csv(csv, field);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "i,j,x,y,sad,points");
    int rows = 0;
    while (std::getline(lines, line))
        ++rows;
    CHECK(rows == 4);
}

TEST_CASE("timeline serialization round-trips through json values", "[serialize]") {
    IntensityTimeline timeline;
    timeline.step = 2;
    timeline.stride = 2;
    timeline.frame_count = 6;
    TimelineSample s;
    s.start = 0;
    s.end = 2;
    s.activity.average = 1.5;
    s.activity.variance = 0.25;
    s.activity.intensity = 0.5;
    s.activity.level = 1;
    timeline.samples.push_back(s);

    nlohmann::json j = timeline;
    CHECK(j["step"] == 2);
    CHECK(j["frame_count"] == 6);
    REQUIRE(j["samples"].size() == 1);
    CHECK(j["samples"][0]["pair_start"] == 0);
    CHECK(j["samples"][0]["intensity"] == 0.5);
    CHECK(j["samples"][0]["level"] == 1);

    std::ostringstream csv;
    write_timeline_csv(csv, timeline);
    CHECK(csv.str() == "pair_start,pair_end,avg,variance,intensity,level\n"
                       "0,2,1.5,0.25,0.5,1\n");
}

TEST_CASE("diff signal csv", "[serialize]") {
    DiffSignal signal;
    signal.points.push_back({2, 0.75});
    signal.points.push_back({4, 3.0});
    std::ostringstream csv;
    write_signal_csv(csv, signal);
    CHECK(csv.str() == "t,diff\n2,0.75\n4,3\n");

    nlohmann::json j = signal;
    REQUIRE(j["points"].size() == 2);
    CHECK(j["points"][1]["t"] == 4);
    CHECK(j["points"][1]["diff"] == 3.0);
}

TEST_CASE("shot list serialization", "[serialize]") {
    ShotList list;
    list.boundaries = {30};
    list.shots = {{0, 29, 0}, {30, 59, 30}};
    list.threshold_used = 1.25;

    nlohmann::json j = list;
    CHECK(j["boundaries"] == nlohmann::json::array({30}));
    REQUIRE(j["shots"].size() == 2);
    CHECK(j["shots"][1]["start"] == 30);
    CHECK(j["shots"][1]["key_frame"] == 30);
    CHECK(j["threshold_used"] == 1.25);

    std::ostringstream text;
    write_boundaries_text(text, list);
    CHECK(text.str() == "30\n");
}

TEST_CASE("boundary text output feeds back into the annotation parser", "[serialize]") {
    ShotList list;
    list.boundaries = {12, 40, 88};
    std::ostringstream text;
    write_boundaries_text(text, list);

    std::istringstream in(text.str());
    auto truth = parse_ground_truth(in);
    CHECK(truth.boundaries == list.boundaries);
}

TEST_CASE("evaluation report serialization", "[serialize]") {
    GroundTruth truth;
    for (int i = 1; i <= 11; ++i)
        truth.boundaries.push_back(100 * i);
    truth.kinds.assign(11, TransitionKind::unspecified);
    std::vector<int> detected;
    for (int i = 1; i <= 8; ++i)
        detected.push_back(100 * i);
    auto report = score(detected, truth, 4);

    nlohmann::json j = report;
    CHECK(j["reported"] == 8);
    CHECK(j["in_reference"] == 11);
    CHECK(j["correct"] == 8);
    CHECK(j["false"] == 0);
    CHECK(j["missed"] == 3);
    CHECK(j["precision"] == 1.0);
    REQUIRE(j["matches"].size() == 8);
    CHECK(j["matches"][0]["detected"] == 100);

    std::ostringstream text;
    write_eval_text(text, report);
    auto s = text.str();
    CHECK(s.find("Precision  Recall  FP") != std::string::npos);
    CHECK(s.find("100.00%") != std::string::npos);
    CHECK(s.find("72.72%") != std::string::npos);
    CHECK(s.find("0.00%") != std::string::npos);
}

TEST_CASE("search stats serialization", "[serialize]") {
    SearchStats stats;
    stats.avg_search_points = 132.25;
    stats.total_sad = 9001;
    nlohmann::json j = stats;
    CHECK(j["avg_search_points"] == 132.25);
    CHECK(j["total_sad"] == 9001);
}
