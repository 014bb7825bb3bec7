#pragma once
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "brisket/env.hpp"
#include "brisket/net.hpp"

namespace brisket {

inline constexpr int kWeightFormatVersion = 1;

// Weight files carry the full architecture so a loaded net needs no side
// channel. Doubles survive the JSON round trip bit-exactly (shortest
// round-trippable representation), which keeps checkpoints reproducible.
nlohmann::json net_to_json(const DenseNet& net);

// `context` prefixes every error message (usually the file path); shape
// problems name the offending layer.
DenseNet net_from_json(const nlohmann::json& j, const std::string& context);

void save_net(const DenseNet& net, const std::filesystem::path& path);
DenseNet load_net(const std::filesystem::path& path);

struct CheckpointMeta {
    std::string training_stage;  // "diversity", "finetune", "baseline", ...
    int policy_id = 0;
    int episode = 0;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
};

// A checkpoint is a weight file plus run provenance, so load_net also accepts
// checkpoint files.
void save_checkpoint(const DenseNet& net, const CheckpointMeta& meta,
                     const std::filesystem::path& path);
std::pair<DenseNet, CheckpointMeta> load_checkpoint(const std::filesystem::path& path);

// Appends one JSON object per line; flushed per write so partial runs leave
// readable logs.
class MetricsWriter {
public:
    explicit MetricsWriter(const std::filesystem::path& path);
    void write(const nlohmann::json& record);

private:
    std::ofstream out_;
};

nlohmann::json events_to_json(const PlayerEvents& events);

// One replay line per submitted action: who acted, what they saw, what they
// did, and what landed that frame.
void write_replay_line(std::ostream& out, int frame, int player,
                       const Observation& observation, int action, const PlayerEvents& events);

} // namespace brisket
