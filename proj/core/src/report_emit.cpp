#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "cyclecheck/digest.hpp"
#include "cyclecheck/errors.hpp"
#include "cyclecheck/json_writer.hpp"
#include "cyclecheck/report.hpp"
#include "cyclecheck/runlog.hpp"
#include "report_detail.hpp"

namespace fs = std::filesystem;

namespace cyclecheck {

namespace {

using FileList = std::vector<std::pair<std::string, std::string>>;

void validate_shape(const QualityReport& report) {
  if (!report.grid) throw ConfigError("report emission needs the analysis grid");
  for (const IntrinsicSection& s : report.sections) {
    if (!s.bundle) throw ConfigError("report section lacks its network bundle");
  }
  const bool intrinsic = report.sections.size() == 1 && !report.extrinsic;
  const bool compared = report.sections.size() == 2 && report.extrinsic &&
                        report.extrinsic->bundle_a && report.extrinsic->bundle_b;
  if (!intrinsic && !compared) {
    throw ConfigError(
        "report must hold one data set, or two plus their comparison");
  }
}

FileList assemble(const QualityReport& report,
                  const std::vector<PlotArtifact>& plots) {
  FileList files;
  if (!report.extrinsic) {
    const IntrinsicSection& s = report.sections.front();
    files.emplace_back("summary.json", intrinsic_summary_json(report, s));
    files.emplace_back("network.geojson",
                       network_geojson(s.bundle->graph, s.bundle->component_set));
    files.emplace_back("grid.geojson", grid_geojson(s, *report.grid));
    files.emplace_back("flags/dangling_node.geojson",
                       detail::dangling_geojson(*s.bundle));
    files.emplace_back("flags/overshoot.geojson",
                       detail::overshoots_geojson(s));
    files.emplace_back("flags/undershoot.geojson",
                       detail::topology_flags_geojson(s.undershoots));
    files.emplace_back("flags/missing_intersection_node.geojson",
                       detail::topology_flags_geojson(s.missing_intersections));
    files.emplace_back("flags/component_gap.geojson",
                       detail::topology_flags_geojson(s.component_gaps));
    if (s.tags_analyzed) {
      files.emplace_back("flags/missing_tag.geojson",
                         detail::tag_flags_geojson(s, s.missing_tags.flags));
      files.emplace_back("flags/contradiction.geojson",
                         detail::tag_flags_geojson(s, s.contradiction_flags));
    }
  } else {
    const ExtrinsicSection& x = *report.extrinsic;
    files.emplace_back("summary.json", comparison_summary_json(report));
    files.emplace_back("grid.geojson",
                       comparison_grid_geojson(x.comparison, *report.grid));
    files.emplace_back("match/matched_edges_" + x.label_a + ".csv",
                       detail::match_csv(x, true));
    files.emplace_back("match/matched_edges_" + x.label_b + ".csv",
                       detail::match_csv(x, false));
    files.emplace_back(
        "match/unmatched_" + x.label_a + ".geojson",
        detail::unmatched_geojson(*x.bundle_a, x.unmatched.unmatched_a));
    files.emplace_back(
        "match/unmatched_" + x.label_b + ".geojson",
        detail::unmatched_geojson(*x.bundle_b, x.unmatched.unmatched_b));
  }
  for (const PlotArtifact& p : plots) files.emplace_back(p.file_name, p.svg);
  files.emplace_back("report.html", render_html(report, plots));
  if (report.log) files.emplace_back("run.log.jsonl", report.log->to_jsonl());
  return files;
}

std::string manifest_json(const QualityReport& report,
                          const std::vector<ManifestEntry>& entries) {
  JsonWriter w;
  w.begin_object();
  w.key("tool_version").value(report.tool_version);
  w.key("config_digest").value(report.config_digest);
  w.key("files").begin_array();
  for (const ManifestEntry& e : entries) {
    w.begin_object();
    w.key("path").value(e.path);
    w.key("bytes").value(e.bytes);
    w.key("sha256").value(e.sha256);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.take();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw OutputError("cannot write " + path.string());
}

}  // namespace

FileManifest emit_layers(const QualityReport& report, const std::string& out_dir,
                         bool overwrite) {
  validate_shape(report);
  const auto plots = detail::build_plots(report);
  FileList files = assemble(report, plots);

  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw OutputError("cannot create output directory " + out_dir);

  if (!overwrite) {
    for (const auto& [rel, content] : files) {
      if (fs::exists(root / rel)) {
        throw OutputError("refusing to overwrite " + (root / rel).string() +
                          "; pass the overwrite flag to replace it");
      }
    }
    if (fs::exists(root / "manifest.json")) {
      throw OutputError("refusing to overwrite " +
                        (root / "manifest.json").string() +
                        "; pass the overwrite flag to replace it");
    }
  }

  FileManifest manifest;
  for (const auto& [rel, content] : files) {
    const fs::path target = root / rel;
    fs::create_directories(target.parent_path(), ec);
    if (ec) {
      throw OutputError("cannot create directory " +
                        target.parent_path().string());
    }
    write_file(target, content);
    ManifestEntry entry;
    entry.path = rel;
    entry.bytes = content.size();
    entry.sha256 = sha256_hex(content);
    manifest.entries.push_back(std::move(entry));
  }
  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) {
              return a.path < b.path;
            });
  write_file(root / "manifest.json", manifest_json(report, manifest.entries));
  return manifest;
}

}  // namespace cyclecheck
