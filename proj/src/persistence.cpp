#include "brisket/persistence.hpp"

#include <stdexcept>

namespace brisket {
namespace {

nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_json_file(const nlohmann::json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace

nlohmann::json net_to_json(const DenseNet& net) {
    validate_net(net);
    nlohmann::json j;
    j["format_version"] = kWeightFormatVersion;
    j["dims"] = net.dims;
    j["activations"] = nlohmann::json::array();
    for (Activation a : net.activations) j["activations"].push_back(to_string(a));
    j["weights"] = net.weights;
    j["biases"] = net.biases;
    return j;
}

DenseNet net_from_json(const nlohmann::json& j, const std::string& context) {
    const auto fail = [&](const std::string& what) {
        throw std::invalid_argument(context + ": " + what);
    };
    if (!j.is_object()) fail("weight data must be a JSON object");
    for (const char* key : {"format_version", "dims", "activations", "weights", "biases"}) {
        if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
    }
    if (j.at("format_version").get<int>() != kWeightFormatVersion)
        fail("unsupported format_version " + j.at("format_version").dump());

    DenseNet net;
    try {
        net.dims = j.at("dims").get<std::vector<int>>();
        for (const auto& a : j.at("activations"))
            net.activations.push_back(activation_from_string(a.get<std::string>()));
        net.weights = j.at("weights").get<std::vector<std::vector<double>>>();
        net.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("malformed weight data: ") + e.what());
    }

    if (net.dims.size() < 2) fail("dims must list at least two layer widths");
    if (net.activations.size() != net.dims.size() - 1)
        fail("expected " + std::to_string(net.dims.size() - 1) + " activations, got " +
             std::to_string(net.activations.size()));
    if (net.weights.size() != net.dims.size() - 1 || net.biases.size() != net.dims.size() - 1)
        fail("expected " + std::to_string(net.dims.size() - 1) + " weight/bias layers");
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const std::size_t expected_w =
            static_cast<std::size_t>(net.dims[l]) * static_cast<std::size_t>(net.dims[l + 1]);
        if (net.weights[l].size() != expected_w)
            fail("layer " + std::to_string(l) + ": expected " + std::to_string(expected_w) +
                 " weights, got " + std::to_string(net.weights[l].size()));
        if (net.biases[l].size() != static_cast<std::size_t>(net.dims[l + 1]))
            fail("layer " + std::to_string(l) + ": expected " +
                 std::to_string(net.dims[l + 1]) + " biases, got " +
                 std::to_string(net.biases[l].size()));
    }
    return net;
}

void save_net(const DenseNet& net, const std::filesystem::path& path) {
    write_json_file(net_to_json(net), path);
}

DenseNet load_net(const std::filesystem::path& path) {
    return net_from_json(load_json_file(path), path.string());
}

void save_checkpoint(const DenseNet& net, const CheckpointMeta& meta,
                     const std::filesystem::path& path) {
    nlohmann::json j = net_to_json(net);
    j["training_stage"] = meta.training_stage;
    j["policy_id"] = meta.policy_id;
    j["episode"] = meta.episode;
    j["seed"] = meta.seed;
    j["config_hash"] = meta.config_hash;
    write_json_file(j, path);
}

std::pair<DenseNet, CheckpointMeta> load_checkpoint(const std::filesystem::path& path) {
    const nlohmann::json j = load_json_file(path);
    DenseNet net = net_from_json(j, path.string());
    CheckpointMeta meta;
    const auto fail = [&](const std::string& what) {
        throw std::invalid_argument(path.string() + ": " + what);
    };
    for (const char* key : {"training_stage", "policy_id", "episode", "seed", "config_hash"}) {
        if (!j.contains(key)) fail(std::string("missing checkpoint field '") + key + "'");
    }
    try {
        meta.training_stage = j.at("training_stage").get<std::string>();
        meta.policy_id = j.at("policy_id").get<int>();
        meta.episode = j.at("episode").get<int>();
        meta.seed = j.at("seed").get<std::uint64_t>();
        meta.config_hash = j.at("config_hash").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("malformed checkpoint metadata: ") + e.what());
    }
    return {std::move(net), meta};
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path) : out_(path, std::ios::app) {
    if (!out_) throw std::runtime_error("cannot open metrics file: " + path.string());
}

void MetricsWriter::write(const nlohmann::json& record) {
    out_ << record.dump() << "\n";
    out_.flush();
    if (!out_) throw std::runtime_error("metrics write failed");
}

nlohmann::json events_to_json(const PlayerEvents& events) {
    return {{"dealt_damage", events.dealt_damage},
            {"took_damage", events.took_damage},
            {"dealt_counter", events.dealt_counter}};
}

void write_replay_line(std::ostream& out, int frame, int player,
                       const Observation& observation, int action, const PlayerEvents& events) {
    nlohmann::json j;
    j["frame"] = frame;
    j["player"] = player;
    j["observation"] = observation;
    j["action"] = action;
    j["events"] = events_to_json(events);
    out << j.dump() << "\n";
}

} // namespace brisket
