#include <catch2/catch_amalgamated.hpp>

#include "lorasim/scenario.hpp"

using namespace lorasim;

TEST_CASE("defaults survive a serialize/parse round trip byte for byte") {
    const Scenario s;
    const std::string text = serialize_scenario(s);
    const Scenario back = parse_scenario_text(text);
    REQUIRE(serialize_scenario(back) == text);
}

TEST_CASE("parsed values land in the right fields") {
    const std::string text = R"(
# comment
[network]
cell_m = 5000
num_eds = 42

[channel]
sigma_db = 3.56      ; inline comment
ideal_downlink = true

[mobility]
mode = random-waypoint

[strategy]
strategies = adr-lite,no-adr
device_margin_db = 7.5

[space]
sf = 7,8
tp = 2,14
cf = 868.1,868.4
cr = 4/5,4/8

[run]
name = smoke
horizon_s = 3600
replicates = 2
seed = 99
sweep = sigma
sweep_values = 0,7.08
)";
    const Scenario s = parse_scenario_text(text);
    REQUIRE(s.cell_m == 5000.0);
    REQUIRE(s.num_eds == 42);
    REQUIRE(s.channel.sigma_db == 3.56);
    REQUIRE(s.channel.ideal_downlink);
    REQUIRE(s.mobility.mobile);
    REQUIRE(s.strategies == std::vector<Strategy>{Strategy::adr_lite, Strategy::no_adr});
    REQUIRE(s.device_margin_db == 7.5);
    REQUIRE(s.dims.sf == std::vector<int>{7, 8});
    REQUIRE(s.dims.tp == std::vector<int>{2, 14});
    REQUIRE(s.dims.cf == std::vector<double>{868.1, 868.4});
    REQUIRE(s.dims.cr.size() == 2);
    REQUIRE(s.dims.cr[1].den == 8);
    REQUIRE(s.name == "smoke");
    REQUIRE(s.horizon_s == 3600.0);
    REQUIRE(s.replicates == 2);
    REQUIRE(s.seed == 99);
    REQUIRE(s.sweep == SweepKind::sigma);
    REQUIRE(s.sweep_values == std::vector<std::string>{"0", "7.08"});
    REQUIRE(serialize_scenario(parse_scenario_text(serialize_scenario(s))) ==
            serialize_scenario(s));
}

TEST_CASE("unknown keys are rejected with their path") {
    REQUIRE_THROWS_WITH(parse_scenario_text("[channel]\nbogus = 1\n"),
                        Catch::Matchers::ContainsSubstring("channel.bogus"));
    REQUIRE_THROWS_WITH(parse_scenario_text("[nowhere]\nx = 1\n"),
                        Catch::Matchers::ContainsSubstring("nowhere.x"));
}

TEST_CASE("malformed input is rejected") {
    REQUIRE_THROWS_AS(parse_scenario_text("[network]\ncell_m = fast\n"), ScenarioError);
    REQUIRE_THROWS_AS(parse_scenario_text("[network]\ncell_m 5000\n"), ScenarioError);
    REQUIRE_THROWS_AS(parse_scenario_text("[network\ncell_m = 5000\n"), ScenarioError);
    REQUIRE_THROWS_AS(parse_scenario_text("[network]\nnum_eds = 5\nnum_eds = 6\n"), ScenarioError);
    REQUIRE_THROWS_AS(parse_scenario_text("[mobility]\nmode = teleport\n"), ScenarioError);
    REQUIRE_THROWS_AS(parse_scenario_text("[strategy]\nstrategies = adr-lite,adr-best\n"),
                      ScenarioError);
    REQUIRE_THROWS_AS(parse_scenario_text("[radio]\nairtime_mode = exact\n"), ScenarioError);
    REQUIRE_THROWS_AS(parse_scenario_text("[space]\ncr = 4-5\n"), ScenarioError);
}

TEST_CASE("validation catches out-of-range settings") {
    Scenario s;
    s.num_eds = -1;
    REQUIRE_THROWS_AS(validate_scenario(s), ScenarioError);
    s = Scenario{};
    s.channel.sigma_db = -0.1;
    REQUIRE_THROWS_AS(validate_scenario(s), ScenarioError);
    s = Scenario{};
    s.replicates = 0;
    REQUIRE_THROWS_AS(validate_scenario(s), ScenarioError);
    s = Scenario{};
    s.dims.tp = {3};
    REQUIRE_THROWS_AS(validate_scenario(s), ScenarioError);
    s = Scenario{};
    s.sweep_values = {"1"};
    REQUIRE_THROWS_AS(validate_scenario(s), ScenarioError);
    s = Scenario{};
    s.sweep = SweepKind::sigma;
    REQUIRE_THROWS_AS(validate_scenario(s), ScenarioError);
    s = Scenario{};
    REQUIRE_NOTHROW(validate_scenario(s));
}

TEST_CASE("the gateway defaults to the cell center") {
    Scenario s;
    s.cell_m = 9800.0;
    REQUIRE(s.gateway().x_m == 4900.0);
    REQUIRE(s.gateway().y_m == 4900.0);
    s.gateway_x_m = 1.0;
    s.gateway_y_m = 2.0;
    REQUIRE(s.gateway().x_m == 1.0);
    REQUIRE(s.gateway().y_m == 2.0);
}

TEST_CASE("sweep expansion produces one cell per value") {
    Scenario s;
    s.sweep = SweepKind::num_eds;
    s.sweep_values = {"100", "300"};
    auto cells = expand_sweep(s);
    REQUIRE(cells.size() == 2);
    REQUIRE(cells[0].num_eds == 100);
    REQUIRE(cells[1].num_eds == 300);
    REQUIRE(cells[1].key == "300");
    REQUIRE(cells[1].sigma_db == s.channel.sigma_db);

    s = Scenario{};
    s.sweep = SweepKind::sigma;
    s.sweep_values = {"0", "3.56"};
    cells = expand_sweep(s);
    REQUIRE(cells[0].sigma_db == 0.0);
    REQUIRE(cells[1].sigma_db == 3.56);
    REQUIRE(cells[1].key == "3.56");
    REQUIRE(cells[0].num_eds == s.num_eds);

    s = Scenario{};
    s.sweep = SweepKind::space;
    s.sweep_values = {"config-1", "config-4"};
    cells = expand_sweep(s);
    REQUIRE(cells[0].dims.cf.size() == 1);
    REQUIRE(cells[1].dims.cf.size() == 3);
    REQUIRE(cells[1].dims.cr.size() == 4);

    s = Scenario{};
    REQUIRE(expand_sweep(s).size() == 1);
    REQUIRE(expand_sweep(s)[0].key.empty());
}

TEST_CASE("study presets carry their published shapes") {
    const Scenario s1 = preset_scenario("scenario1");
    REQUIRE(s1.sweep == SweepKind::num_eds);
    REQUIRE(s1.sweep_values.size() == 7);
    REQUIRE_FALSE(s1.mobility.mobile);
    REQUIRE(s1.horizon_s == 12.0 * 86400.0);
    REQUIRE(s1.replicates == 25);

    const Scenario s2 = preset_scenario("scenario2");
    REQUIRE(s2.mobility.mobile);

    const Scenario s3 = preset_scenario("scenario3");
    REQUIRE(s3.sweep == SweepKind::sigma);
    REQUIRE(s3.sweep_values.size() == 9);
    REQUIRE(s3.sweep_values.front() == "0");
    REQUIRE(s3.sweep_values.back() == "7.08");

    const Scenario s4 = preset_scenario("scenario4");
    REQUIRE(s4.sweep == SweepKind::space);
    REQUIRE(s4.sweep_values.size() == 4);
    REQUIRE(s4.horizon_s == 120.0 * 86400.0);

    REQUIRE_THROWS_AS(preset_scenario("scenario5"), ScenarioError);
}

TEST_CASE("desk scale shrinks horizon, replicates and sweep axes") {
    Scenario s = preset_scenario("scenario3");
    apply_desk_scale(s);
    REQUIRE(s.horizon_s == 86400.0);
    REQUIRE(s.replicates == 5);
    REQUIRE(s.sweep_values == std::vector<std::string>{"0", "3.56", "7.08"});

    Scenario s2 = preset_scenario("scenario2");
    apply_desk_scale(s2);
    REQUIRE(s2.sweep_values == std::vector<std::string>{"100", "300"});

    Scenario s4 = preset_scenario("scenario4");
    apply_desk_scale(s4);
    REQUIRE(s4.sweep_values.size() == 4);
    REQUIRE(s4.horizon_s == 86400.0);
}
