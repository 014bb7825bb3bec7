#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "brisket/persistence.hpp"
#include "brisket/rng.hpp"

using namespace brisket;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "brisket_persistence_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

DenseNet sample_net() {
    Rng rng(12345);
    return make_net({5, 4, 3}, {Activation::Relu, Activation::Softmax}, rng);
}

} // namespace

TEST_SUITE("persistence") {
    TEST_CASE("weight json carries the format version and architecture") {
        const DenseNet net = sample_net();
        const nlohmann::json j = net_to_json(net);

        CHECK(j.at("format_version").get<int>() == kWeightFormatVersion);
        CHECK(j.at("dims").get<std::vector<int>>() == std::vector<int>{5, 4, 3});
        CHECK(j.at("activations").get<std::vector<std::string>>() ==
              std::vector<std::string>{"relu", "softmax"});
        CHECK(j.at("weights").size() == 2);
        CHECK(j.at("weights")[0].size() == 20);
        CHECK(j.at("biases")[1].size() == 3);
    }

    TEST_CASE("nets survive the file round trip bit for bit") {
        TempDir tmp;
        DenseNet net = sample_net();
        // shove in values that stress the serializer
        net.weights[0][0] = 1.0 / 3.0;
        net.weights[0][1] = -0.0;
        net.weights[0][2] = std::numeric_limits<double>::denorm_min();
        net.weights[0][3] = 1e308;
        net.weights[0][4] = -2.2250738585072014e-308;
        net.biases[1][0] = std::nextafter(1.0, 2.0);

        const fs::path path = tmp.path / "net.json";
        save_net(net, path);
        const DenseNet loaded = load_net(path);

        CHECK(loaded.dims == net.dims);
        CHECK(loaded.activations == net.activations);
        REQUIRE(loaded.weights.size() == net.weights.size());
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            CHECK(loaded.weights[l] == net.weights[l]);
            CHECK(loaded.biases[l] == net.biases[l]);
        }
        CHECK(std::signbit(loaded.weights[0][1]));
    }

    TEST_CASE("checkpoints add provenance on top of the weights") {
        TempDir tmp;
        const DenseNet net = sample_net();
        CheckpointMeta meta;
        meta.training_stage = "diversity";
        meta.policy_id = 3;
        meta.episode = 17;
        meta.seed = 0xdeadbeefcafe1234ULL;
        meta.config_hash = 0xffffffffffffffffULL;  // full 64-bit range survives

        const fs::path path = tmp.path / "ckpt.json";
        save_checkpoint(net, meta, path);

        const auto [loaded, loaded_meta] = load_checkpoint(path);
        CHECK(loaded.weights == net.weights);
        CHECK(loaded_meta.training_stage == "diversity");
        CHECK(loaded_meta.policy_id == 3);
        CHECK(loaded_meta.episode == 17);
        CHECK(loaded_meta.seed == meta.seed);
        CHECK(loaded_meta.config_hash == meta.config_hash);

        // plain load_net reads a checkpoint too (extra fields are provenance)
        const DenseNet as_net = load_net(path);
        CHECK(as_net.weights == net.weights);

        // but a bare weight file is not a checkpoint
        const fs::path bare = tmp.path / "bare.json";
        save_net(net, bare);
        CHECK_THROWS_WITH_AS(load_checkpoint(bare), doctest::Contains("training_stage"),
                             std::invalid_argument);
    }

    TEST_CASE("malformed weight files fail with the path and layer named") {
        TempDir tmp;
        const DenseNet net = sample_net();

        SUBCASE("missing file") {
            const fs::path missing = tmp.path / "nope.json";
            CHECK_THROWS_WITH_AS(load_net(missing), doctest::Contains("nope.json"),
                                 std::invalid_argument);
        }
        SUBCASE("not json at all") {
            const fs::path garbled = tmp.path / "garbled.json";
            std::ofstream(garbled) << "not json {";
            CHECK_THROWS_WITH_AS(load_net(garbled), doctest::Contains("garbled.json"),
                                 std::invalid_argument);
        }
        SUBCASE("wrong weight count names the layer") {
            nlohmann::json j = net_to_json(net);
            j["weights"][1].erase(0);
            const fs::path path = tmp.path / "short.json";
            std::ofstream(path) << j.dump();
            CHECK_THROWS_WITH_AS(load_net(path), doctest::Contains("layer 1"),
                                 std::invalid_argument);
        }
        SUBCASE("unknown future format version is rejected") {
            nlohmann::json j = net_to_json(net);
            j["format_version"] = 999;
            const fs::path path = tmp.path / "future.json";
            std::ofstream(path) << j.dump();
            CHECK_THROWS_WITH_AS(load_net(path), doctest::Contains("format"),
                                 std::invalid_argument);
        }
        SUBCASE("unknown activation is rejected") {
            nlohmann::json j = net_to_json(net);
            j["activations"][0] = "swish";
            const fs::path path = tmp.path / "swish.json";
            std::ofstream(path) << j.dump();
            CHECK_THROWS_AS(load_net(path), std::invalid_argument);
        }
    }

    TEST_CASE("metrics writer appends one json object per line") {
        TempDir tmp;
        const fs::path path = tmp.path / "metrics.jsonl";
        {
            MetricsWriter writer(path);
            writer.write({{"episode", 0}, {"loss", 0.5}});
            writer.write({{"episode", 1}, {"loss", 0.25}});
        }
        {
            // a fresh writer on the same path appends rather than truncating
            MetricsWriter writer(path);
            writer.write({{"episode", 2}, {"loss", 0.125}});
        }

        std::ifstream in(path);
        std::string line;
        int lines = 0;
        while (std::getline(in, line)) {
            const nlohmann::json j = nlohmann::json::parse(line);
            CHECK(j.at("episode").get<int>() == lines);
            lines += 1;
        }
        CHECK(lines == 3);
    }

    TEST_CASE("replay lines carry the whole decision") {
        PlayerEvents events;
        events.dealt_damage = true;

        Observation obs{};
        obs[0] = 1.0;
        obs[126] = 0.5;

        std::ostringstream out;
        write_replay_line(out, 42, 1, obs, 12, events);
        write_replay_line(out, 50, 0, obs, 3, PlayerEvents{});

        std::istringstream in(out.str());
        std::string line;
        REQUIRE(std::getline(in, line));
        const nlohmann::json first = nlohmann::json::parse(line);
        CHECK(first.at("frame").get<int>() == 42);
        CHECK(first.at("player").get<int>() == 1);
        CHECK(first.at("action").get<int>() == 12);
        CHECK(first.at("observation").size() == 143);
        CHECK(first.at("observation")[0].get<double>() == 1.0);
        CHECK(first.at("events").at("dealt_damage").get<bool>());
        CHECK(!first.at("events").at("took_damage").get<bool>());

        REQUIRE(std::getline(in, line));
        const nlohmann::json second = nlohmann::json::parse(line);
        CHECK(second.at("frame").get<int>() == 50);
        CHECK(!second.at("events").at("dealt_counter").get<bool>());
    }

    TEST_CASE("events serialize to the documented keys") {
        PlayerEvents events;
        events.took_damage = true;
        events.dealt_counter = true;
        const nlohmann::json j = events_to_json(events);
        CHECK(!j.at("dealt_damage").get<bool>());
        CHECK(j.at("took_damage").get<bool>());
        CHECK(j.at("dealt_counter").get<bool>());
    }
}
