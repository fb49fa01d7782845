#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "geocluster/clustering.hpp"
#include "geocluster/design.hpp"
#include "geocluster/geometry.hpp"

namespace geocluster {

// Units are re-indexed to 0..n-1 in file order; ids keeps the original labels.
struct PointsFile {
    PointSet points;
    std::vector<long long> ids;
};

// CSV rows are id,x,y[,z...]; an optional header line is skipped. Dimension is
// inferred from the first data row.
PointsFile read_points_csv(const std::string& path, Metric metric = Metric::Euclidean);

// JSON object with "points" (array of coordinate arrays) and optional "ids".
PointsFile read_points_json(const std::string& path, Metric metric = Metric::Euclidean);

// Dispatch on file extension (.csv / .json).
PointsFile read_points(const std::string& path, Metric metric = Metric::Euclidean);

// CSV rows are id,y; every point id must appear exactly once.
std::vector<double> read_outcomes_csv(const std::string& path, const std::vector<long long>& ids);

// FNV-1a 64-bit digest of the file bytes, as 16 hex characters.
std::string file_digest_hex(const std::string& path);

// Provenance block embedded in every artifact. config_json holds the fully
// resolved flag set as a serialized JSON object. The timestamp is
// caller-supplied so that reruns with equal manifests stay byte-identical.
struct Manifest {
    std::string subcommand;
    std::string version;
    std::string timestamp;
    bool has_seed = false;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> inputs; // (path, digest)
    std::string config_json = "{}";
};

std::string render_manifest_json(const Manifest& m);

// r_n, when non-negative, is recorded alongside the clustering so downstream
// estimation can reuse the exclusion radius the clustering was built for.
void write_clustering_json(const std::string& path, const Clustering& c, const Manifest& m,
                           double r_n = -1.0);
Clustering read_clustering_json(const std::string& path);

void write_draw_json(const std::string& path, const AssignmentDraw& draw, const Manifest& m);
AssignmentDraw read_draw_json(const std::string& path);

} // namespace geocluster
