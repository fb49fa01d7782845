#include "geocluster/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace geocluster {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    return out;
}

bool parse_ll(const std::string& s, long long& out) {
    try {
        std::size_t pos = 0;
        out = std::stoll(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

json parse_json_file(const std::string& path) {
    json j = json::parse(slurp(path), nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("malformed JSON in " + path);
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

PointsFile make_points(std::vector<double> coords, int dim, std::vector<long long> ids,
                       Metric metric, const std::string& path) {
    std::set<long long> seen(ids.begin(), ids.end());
    if (seen.size() != ids.size()) throw std::runtime_error("duplicate point ids in " + path);
    return PointsFile{PointSet(std::move(coords), dim, metric), std::move(ids)};
}

} // namespace

PointsFile read_points_csv(const std::string& path, Metric metric) {
    std::istringstream in(slurp(path));
    std::string line;
    std::vector<double> coords;
    std::vector<long long> ids;
    int dim = -1;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_csv_line(line);
        long long id;
        if (!parse_ll(fields[0], id)) {
            if (ids.empty()) continue; // header line
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad id field");
        }
        if (dim < 0) {
            dim = static_cast<int>(fields.size()) - 1;
            if (dim < 1) throw std::runtime_error(path + ": need at least id and one coordinate");
        }
        if (static_cast<int>(fields.size()) != dim + 1)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": inconsistent column count");
        for (int a = 1; a <= dim; ++a) {
            double v;
            if (!parse_double(fields[a], v))
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": bad coordinate field");
            coords.push_back(v);
        }
        ids.push_back(id);
    }
    if (ids.empty()) throw std::runtime_error(path + ": no data rows");
    return make_points(std::move(coords), dim, std::move(ids), metric, path);
}

PointsFile read_points_json(const std::string& path, Metric metric) {
    json j = parse_json_file(path);
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array() || j["points"].empty())
        throw std::runtime_error(path + ": expected object with non-empty \"points\" array");
    const json& pts = j["points"];
    int dim = -1;
    std::vector<double> coords;
    for (const auto& row : pts) {
        if (!row.is_array() || row.empty())
            throw std::runtime_error(path + ": each point must be a coordinate array");
        if (dim < 0) dim = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != dim)
            throw std::runtime_error(path + ": inconsistent point dimension");
        for (const auto& v : row) {
            if (!v.is_number()) throw std::runtime_error(path + ": coordinates must be numbers");
            coords.push_back(v.get<double>());
        }
    }
    std::vector<long long> ids;
    if (j.contains("ids")) {
        if (!j["ids"].is_array() || j["ids"].size() != pts.size())
            throw std::runtime_error(path + ": \"ids\" must match \"points\" length");
        for (const auto& v : j["ids"]) ids.push_back(v.get<long long>());
    } else {
        ids.resize(pts.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<long long>(i);
    }
    return make_points(std::move(coords), dim, std::move(ids), metric, path);
}

PointsFile read_points(const std::string& path, Metric metric) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".csv") return read_points_csv(path, metric);
    if (ext == ".json") return read_points_json(path, metric);
    throw std::runtime_error("unrecognized points file extension (want .csv or .json): " + path);
}

std::vector<double> read_outcomes_csv(const std::string& path,
                                      const std::vector<long long>& ids) {
    std::istringstream in(slurp(path));
    std::string line;
    std::vector<std::pair<long long, double>> rows;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected id,y");
        long long id;
        double y;
        if (!parse_ll(fields[0], id)) {
            if (rows.empty()) continue; // header line
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad id field");
        }
        if (!parse_double(fields[1], y))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad outcome field");
        rows.emplace_back(id, y);
    }
    std::vector<double> y(ids.size());
    std::vector<char> filled(ids.size(), 0);
    for (const auto& [id, v] : rows) {
        auto it = std::find(ids.begin(), ids.end(), id);
        if (it == ids.end())
            throw std::runtime_error(path + ": outcome for unknown point id " + std::to_string(id));
        auto idx = static_cast<std::size_t>(it - ids.begin());
        if (filled[idx])
            throw std::runtime_error(path + ": duplicate outcome for id " + std::to_string(id));
        y[idx] = v;
        filled[idx] = 1;
    }
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (!filled[i])
            throw std::runtime_error(path + ": missing outcome for id " + std::to_string(ids[i]));
    return y;
}

std::string file_digest_hex(const std::string& path) {
    std::string bytes = slurp(path);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

namespace {

json manifest_json(const Manifest& m) {
    json j;
    j["subcommand"] = m.subcommand;
    j["version"] = m.version;
    j["timestamp"] = m.timestamp;
    if (m.has_seed) j["seed"] = m.seed;
    json inputs = json::object();
    for (const auto& [path, digest] : m.inputs) inputs[path] = digest;
    j["inputs"] = inputs;
    json cfg = json::parse(m.config_json, nullptr, false);
    if (cfg.is_discarded()) throw std::runtime_error("manifest config is not valid JSON");
    j["config"] = cfg;
    return j;
}

} // namespace

std::string render_manifest_json(const Manifest& m) { return manifest_json(m).dump(); }

void write_clustering_json(const std::string& path, const Clustering& c, const Manifest& m,
                           double r_n) {
    json j;
    j["schema"] = 1;
    j["type"] = "clusters";
    j["manifest"] = manifest_json(m);
    j["k"] = c.k();
    j["n"] = c.n();
    j["cost"] = c.cost;
    j["medoids"] = c.medoids;
    j["assignment"] = c.assignment;
    j["radii"] = c.radii;
    if (r_n >= 0.0) j["r_n"] = r_n;
    write_text(path, j.dump(2) + "\n");
}

Clustering read_clustering_json(const std::string& path) {
    json j = parse_json_file(path);
    for (const char* key : {"medoids", "assignment", "radii", "cost"})
        if (!j.contains(key))
            throw std::runtime_error(path + ": clusters file missing \"" + key + "\"");
    Clustering c;
    c.medoids = j["medoids"].get<std::vector<int>>();
    c.assignment = j["assignment"].get<std::vector<int>>();
    c.radii = j["radii"].get<std::vector<double>>();
    c.cost = j["cost"].get<double>();
    int k = c.k();
    int n = c.n();
    if (k < 1 || n < k) throw std::runtime_error(path + ": inconsistent clusters file");
    if (static_cast<int>(c.radii.size()) != k)
        throw std::runtime_error(path + ": radii length does not match medoids");
    for (int a : c.assignment)
        if (a < 0 || a >= k) throw std::runtime_error(path + ": assignment index out of range");
    for (int jdx = 0; jdx < k; ++jdx) {
        int mid = c.medoids[jdx];
        if (mid < 0 || mid >= n) throw std::runtime_error(path + ": medoid id out of range");
        if (c.assignment[mid] != jdx)
            throw std::runtime_error(path + ": medoid not assigned to its own cluster");
    }
    return c;
}

void write_draw_json(const std::string& path, const AssignmentDraw& draw, const Manifest& m) {
    json j;
    j["schema"] = 1;
    j["type"] = "draw";
    j["manifest"] = manifest_json(m);
    j["k"] = draw.W.size();
    j["n"] = draw.D.size();
    j["W"] = draw.W;
    j["D"] = draw.D;
    write_text(path, j.dump(2) + "\n");
}

AssignmentDraw read_draw_json(const std::string& path) {
    json j = parse_json_file(path);
    if (!j.contains("W") || !j.contains("D"))
        throw std::runtime_error(path + ": draw file missing \"W\" or \"D\"");
    AssignmentDraw d;
    for (const auto& v : j["W"]) {
        int b = v.get<int>();
        if (b != 0 && b != 1) throw std::runtime_error(path + ": W entries must be 0 or 1");
        d.W.push_back(static_cast<std::uint8_t>(b));
    }
    for (const auto& v : j["D"]) {
        int b = v.get<int>();
        if (b != 0 && b != 1) throw std::runtime_error(path + ": D entries must be 0 or 1");
        d.D.push_back(static_cast<std::uint8_t>(b));
    }
    if (d.W.empty() || d.D.empty()) throw std::runtime_error(path + ": empty draw file");
    return d;
}

} // namespace geocluster
