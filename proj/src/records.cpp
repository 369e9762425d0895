#include "mapsim/records.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mapsim {

using nlohmann::json;

std::string slot_row_json(const SlotRow& row) {
    json j;
    j["e"] = row.episode;
    j["t"] = row.t;
    j["ms"] = row.m_s;
    j["conn"] = row.connected;
    j["r_bps"] = row.sum_rate_bps;
    j["eta"] = row.eta;
    j["mr"] = row.mean_reward;
    json theta = json::object();
    for (const auto& [id, v] : row.theta) theta[std::to_string(id)] = v;
    j["theta"] = theta;
    j["ev"] = row.events;
    return j.dump();
}

namespace {

SlotRow parse_slot_row(const json& j) {
    SlotRow row;
    row.episode = j.at("e").get<int>();
    row.t = j.at("t").get<int>();
    row.m_s = j.at("ms").get<int>();
    row.connected = j.at("conn").get<int>();
    row.sum_rate_bps = j.at("r_bps").get<double>();
    row.eta = j.at("eta").get<double>();
    row.mean_reward = j.at("mr").get<double>();
    for (const auto& [key, v] : j.at("theta").items())
        row.theta[std::stoi(key)] = v.get<int>();
    row.events = j.at("ev").get<std::vector<std::string>>();
    return row;
}

}  // namespace

struct RecordWriter::Impl {
    std::ofstream os;
    int last_episode = -1;
    int last_t = -1;
};

RecordWriter::RecordWriter(const std::string& path, const SimConfig& cfg,
                           const std::string& name,
                           const std::vector<std::uint64_t>& seeds)
    : impl_(new Impl) {
    impl_->os.open(path, std::ios::trunc);
    if (!impl_->os) {
        delete impl_;
        throw std::runtime_error("cannot open record file for writing: " + path);
    }
    json header;
    header["kind"] = "header";
    header["name"] = name;
    json config = json::object();
    std::istringstream dump(dump_config(cfg));
    std::string line;
    while (std::getline(dump, line)) {
        std::size_t eq = line.find(" = ");
        if (eq != std::string::npos) config[line.substr(0, eq)] = line.substr(eq + 3);
    }
    header["config"] = config;
    std::ostringstream hash;
    hash << std::hex << config_hash(cfg);
    header["config_fnv64"] = hash.str();
    header["seeds"] = seeds;
    impl_->os << header.dump() << "\n";
}

void RecordWriter::write(const SlotRow& row) {
    if (row.episode < impl_->last_episode ||
        (row.episode == impl_->last_episode && row.t <= impl_->last_t))
        throw std::logic_error("record rows must be strictly ordered by (episode, t)");
    impl_->last_episode = row.episode;
    impl_->last_t = row.t;
    impl_->os << slot_row_json(row) << "\n";
}

void RecordWriter::close() {
    if (impl_ && impl_->os.is_open()) {
        impl_->os.flush();
        impl_->os.close();
        if (!impl_->os) throw std::runtime_error("record file write failed");
    }
}

RecordWriter::~RecordWriter() {
    try {
        close();
    } catch (...) {
    }
    delete impl_;
}

RecordFile read_records(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open record file: " + path);
    RecordFile file;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (!have_header) {
            if (j.value("kind", "") != "header")
                throw std::runtime_error("record file missing header: " + path);
            file.name = j.at("name").get<std::string>();
            file.config_hash_hex = j.at("config_fnv64").get<std::string>();
            file.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
            have_header = true;
            continue;
        }
        file.rows.push_back(parse_slot_row(j));
    }
    if (!have_header) throw std::runtime_error("empty record file: " + path);
    return file;
}

void append_curve_rows(const std::string& path, const std::vector<CurveRow>& rows) {
    std::ofstream os(path, std::ios::app);
    if (!os) throw std::runtime_error("cannot append to curve file: " + path);
    for (const auto& r : rows) {
        json j;
        j["episode"] = r.episode;
        j["steps"] = r.steps;
        j["ep_mr"] = r.episode_mean_reward;
        j["roll"] = r.rolling_mean_reward;
        j["agg"] = r.aggregation_event;
        os << j.dump() << "\n";
    }
}

std::vector<CurveRow> read_curve_rows(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open curve file: " + path);
    std::vector<CurveRow> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        rows.push_back({j.at("episode").get<long>(), j.at("steps").get<long>(),
                        j.at("ep_mr").get<double>(), j.at("roll").get<double>(),
                        j.at("agg").get<bool>()});
    }
    return rows;
}

}  // namespace mapsim
