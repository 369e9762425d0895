#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mapsim/config.hpp"

namespace mapsim {

// One per-slot metrics row of an episode stream.
struct SlotRow {
    int episode = 0;
    int t = 0;
    int m_s = 0;
    int connected = 0;
    double sum_rate_bps = 0.0;
    double eta = 0.0;
    double mean_reward = 0.0;
    std::map<int, int> theta;          // per deployed MAP
    std::vector<std::string> events;   // decisions fired this slot
};

// Newline-delimited JSON: one header object (resolved config + seeds + config
// hash), then one object per slot row, ordered by (episode, t). Reruns with
// the same config and seeds produce byte-identical bodies.
class RecordWriter {
  public:
    RecordWriter(const std::string& path, const SimConfig& cfg, const std::string& name,
                 const std::vector<std::uint64_t>& seeds);
    void write(const SlotRow& row);
    void close();
    ~RecordWriter();

  private:
    struct Impl;
    Impl* impl_;
};

struct RecordFile {
    std::string name;
    std::string config_hash_hex;
    std::vector<std::uint64_t> seeds;
    std::vector<SlotRow> rows;
};

RecordFile read_records(const std::string& path);

std::string slot_row_json(const SlotRow& row);

// Training-curve rows share the NDJSON idiom (one object per episode).
struct CurveRow {
    long episode = 0;
    long steps = 0;
    double episode_mean_reward = 0.0;
    double rolling_mean_reward = 0.0;
    bool aggregation_event = false;
};

void append_curve_rows(const std::string& path, const std::vector<CurveRow>& rows);
std::vector<CurveRow> read_curve_rows(const std::string& path);

}  // namespace mapsim
