#include "cogload/io.hpp"

#include "cogload/error.hpp"

#include "json.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

namespace cogload {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Recording CSV

fs::path annotations_path(const fs::path& recording) {
  fs::path out = recording;
  out.replace_filename(recording.stem().string() + ".annotations.csv");
  return out;
}

bool is_known_unit(std::string_view unit) noexcept {
  static constexpr std::array<std::string_view, 10> kUnits = {"", "uV", "mV", "V", "mm", "px",
                                                              "deg", "s", "au", "1"};
  return std::find(kUnits.begin(), kUnits.end(), unit) != kUnits.end();
}

namespace {

// Line-by-line view with 1-based numbers.
class Lines {
 public:
  explicit Lines(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ > text_.size() || (pos_ == text_.size() && number_ > 0)) return false;
    const auto end = text_.find('\n', pos_);
    line = text_.substr(pos_, end == std::string_view::npos ? text_.npos : end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end == std::string_view::npos ? text_.size() + 1 : end + 1;
    ++number_;
    return true;
  }
  std::size_t number() const noexcept { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_{0};
  std::size_t number_{0};
};

[[noreturn]] void parse_fail(std::size_t line, const std::string& reason) {
  throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + reason);
}

void check_label(const std::string& label) {
  if (label.empty() || label.find_first_of(",:\n\r#") != std::string::npos) {
    throw Error(Errc::InvalidArgument, "channel label '" + label + "' cannot be written to CSV");
  }
}

}  // namespace

TimeSeries parse_recording(std::string_view text, std::vector<std::string>* warnings) {
  Lines lines(text);
  std::string_view line;
  KeyValues header;
  std::size_t header_line = 0;
  bool have_columns = false;
  std::vector<Channel> channels;
  std::vector<std::vector<double>> data;
  double rate = 0.0;
  double t0 = 0.0;

  while (lines.next(line)) {
    const auto stripped = trim(line);
    if (!have_columns) {
      if (stripped.empty()) continue;
      if (stripped.front() == '#') {
        const auto body = trim(std::string_view(stripped).substr(1));
        const auto eq = body.find('=');
        if (eq == std::string::npos) continue;  // free-form comment
        header[trim(std::string_view(body).substr(0, eq))] =
            trim(std::string_view(body).substr(eq + 1));
        continue;
      }
      header_line = lines.number();
      if (!header.count("rate_hz")) parse_fail(header_line, "header lacks rate_hz");
      if (!header.count("channels")) parse_fail(header_line, "header lacks channels");
      try {
        rate = parse_double(header.at("rate_hz"));
        t0 = header.count("t0_s") ? parse_double(header.at("t0_s")) : 0.0;
      } catch (const Error&) {
        parse_fail(header_line, "malformed rate_hz or t0_s");
      }
      if (!(rate > 0.0) || !std::isfinite(rate)) parse_fail(header_line, "rate_hz must be positive");
      for (const auto& item : split(header.at("channels"), ',')) {
        const auto colon = item.find(':');
        Channel ch = colon == std::string::npos
                         ? Channel{item, ""}
                         : Channel{trim(item.substr(0, colon)), trim(item.substr(colon + 1))};
        if (ch.label.empty()) parse_fail(header_line, "empty channel label");
        if (!is_known_unit(ch.unit) && warnings) {
          warnings->push_back("UnknownUnit: channel '" + ch.label + "' has unit '" + ch.unit + "'");
        }
        channels.push_back(std::move(ch));
      }
      const auto cols = split(stripped, ',');
      if (cols.size() != channels.size() + 1) {
        parse_fail(header_line, "expected " + std::to_string(channels.size() + 1) +
                                    " columns, found " + std::to_string(cols.size()));
      }
      if (cols[0] != "time_s") parse_fail(header_line, "first column must be time_s");
      for (std::size_t c = 0; c < channels.size(); ++c) {
        if (cols[c + 1] != channels[c].label) {
          parse_fail(header_line, "column '" + cols[c + 1] + "' does not match channel '" +
                                      channels[c].label + "'");
        }
      }
      data.assign(channels.size(), {});
      have_columns = true;
      continue;
    }
    if (stripped.empty()) continue;
    const auto fields = split(stripped, ',');
    if (fields.size() != channels.size() + 1) {
      parse_fail(lines.number(), "expected " + std::to_string(channels.size() + 1) +
                                     " columns, found " + std::to_string(fields.size()));
    }
    double t = 0.0;
    try {
      t = parse_double(fields[0]);
    } catch (const Error&) {
      parse_fail(lines.number(), "timestamp '" + fields[0] + "' is not a number");
    }
    const std::size_t k = data.front().size();
    const double expected = t0 + static_cast<double>(k) / rate;
    if (!std::isfinite(t) || std::abs(t - expected) > 0.5 / rate) {
      throw Error(Errc::RateJitter, "row " + std::to_string(k + 1) + " (line " +
                                        std::to_string(lines.number()) + "): timestamp " +
                                        fields[0] + " s, expected " + format_double(expected) +
                                        " s at " + format_double(rate) + " Hz");
    }
    for (std::size_t c = 0; c < channels.size(); ++c) {
      try {
        data[c].push_back(parse_double(fields[c + 1]));
      } catch (const Error&) {
        parse_fail(lines.number(), "value '" + fields[c + 1] + "' is not a number");
      }
    }
  }
  if (!have_columns) throw Error(Errc::ParseError, "recording has no column header");
  std::set<std::string> seen;
  for (const auto& ch : channels) {
    if (!seen.insert(ch.label).second) {
      parse_fail(header_line, "channel '" + ch.label + "' listed twice");
    }
  }
  return TimeSeries(rate, std::move(channels), std::move(data), t0);
}

std::vector<Annotation> parse_annotations(std::string_view text) {
  Lines lines(text);
  std::string_view line;
  std::vector<Annotation> out;
  bool header = false;
  while (lines.next(line)) {
    const auto stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    if (!header) {
      if (stripped != "time_s,tag") parse_fail(lines.number(), "expected header time_s,tag");
      header = true;
      continue;
    }
    const auto comma = stripped.find(',');
    if (comma == std::string::npos) parse_fail(lines.number(), "expected time_s,tag");
    Annotation a;
    try {
      a.time_s = parse_double(std::string_view(stripped).substr(0, comma));
    } catch (const Error&) {
      parse_fail(lines.number(), "annotation time is not a number");
    }
    a.tag = trim(std::string_view(stripped).substr(comma + 1));
    out.push_back(std::move(a));
  }
  return out;
}

TimeSeries load_recording(const fs::path& path, std::vector<std::string>* warnings) {
  TimeSeries series = parse_recording(read_text(path), warnings);
  const auto companion = annotations_path(path);
  if (fs::exists(companion)) {
    auto annotations = parse_annotations(read_text(companion));
    series = TimeSeries(series.rate_hz(), series.channels(), series.data(), series.t0_s(),
                        std::move(annotations));
  }
  return series;
}

std::string format_recording(const TimeSeries& series) {
  std::string out;
  out += "# rate_hz=" + format_double(series.rate_hz()) + "\n";
  out += "# t0_s=" + format_double(series.t0_s()) + "\n";
  out += "# channels=";
  for (std::size_t c = 0; c < series.channel_count(); ++c) {
    check_label(series.channel(c).label);
    if (c) out += ",";
    out += series.channel(c).label + ":" + series.channel(c).unit;
  }
  out += "\ntime_s";
  for (const auto& ch : series.channels()) out += "," + ch.label;
  out += "\n";
  for (std::size_t k = 0; k < series.sample_count(); ++k) {
    out += format_double(series.time_at(k));
    for (std::size_t c = 0; c < series.channel_count(); ++c) {
      out += ",";
      out += format_double(series.data()[c][k]);
    }
    out += "\n";
  }
  return out;
}

std::string format_annotations(const std::vector<Annotation>& annotations) {
  std::string out = "time_s,tag\n";
  for (const auto& a : annotations) {
    if (a.tag.find_first_of("\n\r") != std::string::npos) {
      throw Error(Errc::InvalidArgument, "annotation tags must be single-line");
    }
    out += format_double(a.time_s) + "," + a.tag + "\n";
  }
  return out;
}

void save_recording(const fs::path& path, const TimeSeries& series) {
  write_file_atomic(path, format_recording(series));
  if (!series.annotations().empty()) {
    write_file_atomic(annotations_path(path), format_annotations(series.annotations()));
  }
}

// ---------------------------------------------------------------------------
// Files

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(Errc::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(Errc::IoError, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::IoError, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_text(path)); }

// ---------------------------------------------------------------------------
// Datasets and tables

std::string format_dataset(const FeatureDataset& ds) {
  ds.validate();
  std::string out = "person,repetition,condition,label";
  for (Eigen::Index j = 0; j < ds.X.cols(); ++j) out += ",f" + std::to_string(j);
  out += "\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out += ds.person_ids.empty() ? "" : ds.person_ids[i];
    out += ",";
    out += ds.repetition_ids.empty() ? "0" : std::to_string(ds.repetition_ids[i]);
    out += ",";
    out += ds.conditions.empty() ? "" : ds.conditions[i];
    out += "," + format_double(ds.y[i]);
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
      out += ",";
      out += format_double(ds.X(static_cast<Eigen::Index>(i), j));
    }
    out += "\n";
  }
  return out;
}

FeatureDataset parse_dataset(std::string_view text) {
  Lines lines(text);
  std::string_view line;
  std::size_t columns = 0;
  std::vector<std::vector<double>> rows;
  FeatureDataset ds;
  while (lines.next(line)) {
    const auto stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto fields = split(stripped, ',');
    if (columns == 0) {
      if (fields.size() < 4 || fields[0] != "person" || fields[1] != "repetition" ||
          fields[2] != "condition" || fields[3] != "label") {
        parse_fail(lines.number(), "expected header person,repetition,condition,label,...");
      }
      columns = fields.size();
      continue;
    }
    if (fields.size() != columns) {
      parse_fail(lines.number(), "expected " + std::to_string(columns) + " columns, found " +
                                     std::to_string(fields.size()));
    }
    try {
      ds.person_ids.push_back(fields[0]);
      ds.repetition_ids.push_back(static_cast<int>(std::lround(parse_double(fields[1]))));
      ds.conditions.push_back(fields[2]);
      ds.y.push_back(parse_double(fields[3]));
      std::vector<double> row;
      row.reserve(columns - 4);
      for (std::size_t j = 4; j < columns; ++j) row.push_back(parse_double(fields[j]));
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      parse_fail(lines.number(), e.what());
    }
  }
  if (columns == 0) throw Error(Errc::ParseError, "dataset has no header");
  ds.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns - 4));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      ds.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return ds;
}

std::string format_power_course(const PowerCourse& course) {
  std::string out = "# band_low_hz=" + format_double(course.band.low_hz) + "\n";
  out += "# band_high_hz=" + format_double(course.band.high_hz) + "\n";
  out += std::string("# normalized=") + (course.normalized ? "1" : "0") + "\n";
  out += "time_s,power\n";
  for (std::size_t f = 0; f < course.values.size(); ++f) {
    out += format_double(course.frame_times_s[f]) + "," + format_double(course.values[f]) + "\n";
  }
  return out;
}

std::string format_blink_report(const BlinkReport& report) {
  json j = {{"count", report.count},
            {"per_minute", report.per_minute},
            {"duration_s", report.duration_s},
            {"blink_times_s", report.blink_times_s}};
  return j.dump(2) + "\n";
}

namespace {

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<PlotSeries>& series) {
  constexpr double kW = 800, kH = 420, kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;
  static constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c",
                                                         "#9467bd", "#ff7f0e", "#17becf"};
  double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x1 > x0)) { x0 = std::isfinite(x0) ? x0 - 1 : 0; x1 = x0 + 2; }
  if (!(y1 > y0)) { y0 = std::isfinite(y0) ? y0 - 1 : 0; y1 = y0 + 2; }
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0;
    const double yv = y0 + (y1 - y0) * t / 4.0;
    svg << "<text x=\"" << px(xv) << "\" y=\"" << kTop + ph + 16
        << "\" text-anchor=\"middle\">" << format_double(std::round(xv * 1000) / 1000)
        << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
        << format_double(std::round(yv * 1000) / 1000) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">"
      << xml_escape(x_label) << "</text>\n";
  svg << "<text transform=\"translate(16," << kTop + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(y_label) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % kColors.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i) {
      if (!std::isfinite(series[s].x[i]) || !std::isfinite(series[s].y[i])) continue;
      svg << px(series[s].x[i]) << "," << py(series[s].y[i]) << " ";
    }
    svg << "\"/>\n";
    const double ly = kTop + 14 + 18 * static_cast<double>(s);
    svg << "<line x1=\"" << kW - kRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << kW - kRight + 32 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kW - kRight + 38 << "\" y=\"" << ly << "\">"
        << xml_escape(series[s].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// ---------------------------------------------------------------------------
// Run configuration

KeyValues RunConfig::to_key_values() const {
  KeyValues kv;
  kv["frame_window_s"] = format_double(frame_window_s);
  kv["frame_hop_s"] = format_double(frame_hop_s);
  kv["edge_trim_s"] = format_double(edge_trim_s);
  kv["prefilter_low_hz"] = format_double(prefilter_low_hz);
  kv["prefilter_high_hz"] = format_double(prefilter_high_hz);
  kv["filter_order"] = std::to_string(filter_order);
  kv["iaf_half_width_hz"] = format_double(iaf_half_width_hz);
  kv["iaf_search_low_hz"] = format_double(iaf_search_low_hz);
  kv["iaf_search_high_hz"] = format_double(iaf_search_high_hz);
  kv["theta_center_hz"] = format_double(theta_center_hz);
  kv["theta_half_width_hz"] = format_double(theta_half_width_hz);
  kv["ssd_flank_hz"] = format_double(ssd_flank_hz);
  kv["ssd_gap_hz"] = format_double(ssd_gap_hz);
  kv["ssd_shrinkage"] = format_double(ssd_shrinkage);
  kv["reduction"] = reduction;
  kv["blink_threshold_uv"] = format_double(blink_threshold_uv);
  kv["blink_refractory_s"] = format_double(blink_refractory_s);
  kv["pursuit_drop_head_s"] = format_double(pursuit_drop_head_s);
  kv["pursuit_smooth_window"] = std::to_string(pursuit_smooth_window);
  kv["pursuit_smooth_hop"] = std::to_string(pursuit_smooth_hop);
  kv["pursuit_instance_length"] = std::to_string(pursuit_instance_length);
  kv["normalization"] = normalization;
  kv["pupil_window_s"] = format_double(pupil_window_s);
  kv["svm_c"] = format_double(svm_c);
  kv["svm_epochs"] = std::to_string(svm_epochs);
  kv["scheme"] = scheme;
  kv["stream_capacity_s"] = format_double(stream_capacity_s);
  kv["seed"] = std::to_string(seed);
  return kv;
}

void RunConfig::apply(const KeyValues& kv) {
  const KeyValues known = to_key_values();
  for (const auto& [key, value] : kv) {
    if (!known.count(key)) throw Error(Errc::ParseError, "unknown config key '" + key + "'");
  }
  frame_window_s = kv_double(kv, "frame_window_s", frame_window_s);
  frame_hop_s = kv_double(kv, "frame_hop_s", frame_hop_s);
  edge_trim_s = kv_double(kv, "edge_trim_s", edge_trim_s);
  prefilter_low_hz = kv_double(kv, "prefilter_low_hz", prefilter_low_hz);
  prefilter_high_hz = kv_double(kv, "prefilter_high_hz", prefilter_high_hz);
  filter_order = static_cast<int>(kv_int(kv, "filter_order", filter_order));
  iaf_half_width_hz = kv_double(kv, "iaf_half_width_hz", iaf_half_width_hz);
  iaf_search_low_hz = kv_double(kv, "iaf_search_low_hz", iaf_search_low_hz);
  iaf_search_high_hz = kv_double(kv, "iaf_search_high_hz", iaf_search_high_hz);
  theta_center_hz = kv_double(kv, "theta_center_hz", theta_center_hz);
  theta_half_width_hz = kv_double(kv, "theta_half_width_hz", theta_half_width_hz);
  ssd_flank_hz = kv_double(kv, "ssd_flank_hz", ssd_flank_hz);
  ssd_gap_hz = kv_double(kv, "ssd_gap_hz", ssd_gap_hz);
  ssd_shrinkage = kv_double(kv, "ssd_shrinkage", ssd_shrinkage);
  reduction = kv_string(kv, "reduction", reduction);
  blink_threshold_uv = kv_double(kv, "blink_threshold_uv", blink_threshold_uv);
  blink_refractory_s = kv_double(kv, "blink_refractory_s", blink_refractory_s);
  pursuit_drop_head_s = kv_double(kv, "pursuit_drop_head_s", pursuit_drop_head_s);
  pursuit_smooth_window = kv_int(kv, "pursuit_smooth_window", pursuit_smooth_window);
  pursuit_smooth_hop = kv_int(kv, "pursuit_smooth_hop", pursuit_smooth_hop);
  pursuit_instance_length = kv_int(kv, "pursuit_instance_length", pursuit_instance_length);
  normalization = kv_string(kv, "normalization", normalization);
  pupil_window_s = kv_double(kv, "pupil_window_s", pupil_window_s);
  svm_c = kv_double(kv, "svm_c", svm_c);
  svm_epochs = kv_int(kv, "svm_epochs", svm_epochs);
  scheme = kv_string(kv, "scheme", scheme);
  stream_capacity_s = kv_double(kv, "stream_capacity_s", stream_capacity_s);
  const long long s = kv_int(kv, "seed", static_cast<long long>(seed));
  if (s < 0) throw Error(Errc::ParseError, "seed must be non-negative");
  seed = static_cast<std::uint64_t>(s);
}

// ---------------------------------------------------------------------------
// Manifests

FileDigest digest_of(const fs::path& path) { return {path.string(), sha256_file(path)}; }

std::string manifest_to_json(const Manifest& m) {
  auto digests = [](const std::vector<FileDigest>& files) {
    json arr = json::array();
    for (const auto& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return arr;
  };
  json j;
  j["format"] = "cogload-manifest";
  j["version"] = 1;
  j["tool_version"] = m.tool_version;
  j["command"] = m.command;
  j["argv"] = m.argv;
  j["working_directory"] = m.working_directory;
  j["config"] = m.config;
  j["seed"] = m.seed;
  j["inputs"] = digests(m.inputs);
  j["outputs"] = digests(m.outputs);
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "cogload-manifest") {
      throw Error(Errc::ParseError, "not a manifest document");
    }
    Manifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.working_directory = j.at("working_directory").get<std::string>();
    m.config = j.at("config").get<KeyValues>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& f : j.at("inputs")) {
      m.inputs.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>()});
    }
    for (const auto& f : j.at("outputs")) {
      m.outputs.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("manifest: ") + e.what());
  }
}

}  // namespace cogload
