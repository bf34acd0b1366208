#include "loewner_lab/freq_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "loewner_lab/error.hpp"
#include "loewner_lab/io.hpp"

namespace loewner_lab {

namespace {

using Key = std::pair<double, double>;

Key key_of(Complex z) { return {z.real(), z.imag()}; }

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_field(const std::string& field, std::size_t line) {
  double value = 0.0;
  const std::string t = trim(field);
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::parse,
                "line " + std::to_string(line) + ": cannot parse number '" + t + "'");
  }
  return value;
}

}  // namespace

FrequencyDataset::FrequencyDataset(std::vector<FrequencySample> samples, bool conjugate_closed)
    : samples_(std::move(samples)), conjugate_closed_(conjugate_closed) {
  std::map<Key, std::size_t> seen;
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    const auto& s = samples_[k];
    if (!finite(s.z) || !finite(s.phi)) {
      throw Error(ErrorKind::argument, "sample " + std::to_string(k) + " is not finite");
    }
    if (!seen.emplace(key_of(s.z), k).second) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "duplicate frequency point " << s.z.real() << "+" << s.z.imag() << "i";
      throw Error(ErrorKind::duplicate_frequency, msg.str());
    }
  }
}

std::vector<Complex> FrequencyDataset::points() const {
  std::vector<Complex> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.z);
  return out;
}

std::vector<Complex> FrequencyDataset::values() const {
  std::vector<Complex> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.phi);
  return out;
}

FrequencyDataset close_conjugate(const FrequencyDataset& d) {
  std::map<Key, Complex> present;
  for (const auto& s : d.samples()) present.emplace(key_of(s.z), s.phi);
  std::vector<FrequencySample> out;
  out.reserve(2 * d.size());
  for (const auto& s : d.samples()) {
    out.push_back(s);
    if (s.z.imag() == 0.0) continue;
    const Complex zc = std::conj(s.z);
    const auto it = present.find(key_of(zc));
    if (it == present.end()) {
      out.push_back({zc, std::conj(s.phi)});
      present.emplace(key_of(zc), std::conj(s.phi));
      continue;
    }
    const double scale = std::max(std::abs(s.phi), std::abs(it->second));
    if (std::abs(it->second - std::conj(s.phi)) > 1e-12 * scale) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "response at the conjugate of " << s.z.real() << "+" << s.z.imag()
          << "i is not the conjugate response";
      throw Error(ErrorKind::conjugate_conflict, msg.str());
    }
  }
  return FrequencyDataset(std::move(out), true);
}

PointPartition partition_points(const FrequencyDataset& d) {
  if (!d.conjugate_closed()) {
    throw Error(ErrorKind::argument, "partitioning needs a conjugate-closed dataset");
  }
  std::map<Key, std::size_t> index;
  for (std::size_t k = 0; k < d.size(); ++k) index.emplace(key_of(d.samples()[k].z), k);

  std::vector<std::vector<std::size_t>> groups;
  std::vector<bool> used(d.size(), false);
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (used[k]) continue;
    used[k] = true;
    const Complex z = d.samples()[k].z;
    if (z.imag() == 0.0) {
      groups.push_back({k});
      continue;
    }
    const auto it = index.find(key_of(std::conj(z)));
    if (it == index.end()) {
      throw Error(ErrorKind::argument, "dataset flagged closed but a conjugate is missing");
    }
    used[it->second] = true;
    groups.push_back({k, it->second});
  }
  if (groups.size() % 2 != 0) {
    throw Error(ErrorKind::odd_pair_count,
                "odd number of conjugate groups (" + std::to_string(groups.size()) + ")");
  }
  PointPartition p;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const bool left = g % 2 == 0;
    auto& pts = left ? p.mu : p.lambda;
    auto& vals = left ? p.v : p.w;
    auto& blocks = left ? p.mu_blocks : p.lambda_blocks;
    for (std::size_t k : groups[g]) {
      pts.push_back(d.samples()[k].z);
      vals.push_back(d.samples()[k].phi);
    }
    blocks.push_back(static_cast<int>(groups[g].size()));
  }
  if (p.mu.size() != p.lambda.size()) {
    throw Error(ErrorKind::argument, "partition sides have different sizes");
  }
  return p;
}

FrequencyDataset sample_transfer(const TransferMap& h, std::span<const double> omegas) {
  std::vector<Complex> pts;
  pts.reserve(omegas.size());
  for (double w : omegas) pts.emplace_back(0.0, w);
  const std::vector<Complex> vals = h.evaluate(pts);
  std::vector<FrequencySample> samples;
  samples.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) samples.push_back({pts[k], vals[k]});
  return FrequencyDataset(std::move(samples));
}

std::vector<double> omegas_of(const FrequencyDataset& d) {
  std::vector<double> out;
  out.reserve(d.size());
  for (const auto& s : d.samples()) {
    if (s.z.real() != 0.0 || !(s.z.imag() > 0.0)) {
      throw Error(ErrorKind::argument, "dataset points must lie on the positive imaginary axis");
    }
    out.push_back(s.z.imag());
  }
  return out;
}

FrequencyDataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::vector<FrequencySample> samples;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (!header_seen) {
      std::string compact;
      for (char c : t) {
        if (c != ' ' && c != '\t') compact.push_back(c);
      }
      if (compact != "omega_rad_s,re,im") {
        throw Error(ErrorKind::parse, "line " + std::to_string(lineno) +
                                          ": expected header 'omega_rad_s,re,im'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(t);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (fields.size() != 3) {
      throw Error(ErrorKind::parse,
                  "line " + std::to_string(lineno) + ": expected 3 fields, got " +
                      std::to_string(fields.size()));
    }
    const double w = parse_field(fields[0], lineno);
    const double re = parse_field(fields[1], lineno);
    const double im = parse_field(fields[2], lineno);
    samples.push_back({Complex(0.0, w), Complex(re, im)});
  }
  if (!header_seen) throw Error(ErrorKind::parse, "missing header 'omega_rad_s,re,im'");
  return FrequencyDataset(std::move(samples));
}

FrequencyDataset load_csv(const std::filesystem::path& path) {
  return parse_csv(read_text(path));
}

std::string to_csv(const FrequencyDataset& d) {
  std::string out = "omega_rad_s,re,im\n";
  for (const auto& s : d.samples()) {
    if (s.z.real() != 0.0) {
      throw Error(ErrorKind::argument, "only imaginary-axis points can be written as CSV");
    }
    out += format_double(s.z.imag()) + "," + format_double(s.phi.real()) + "," +
           format_double(s.phi.imag()) + "\n";
  }
  return out;
}

void save_csv(const FrequencyDataset& d, const std::filesystem::path& path) {
  write_text(path, to_csv(d));
}

FrequencyDataset parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorKind::parse, "expected a JSON array of samples");
  std::vector<FrequencySample> samples;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto& o = j[k];
    try {
      samples.push_back({Complex(0.0, o.at("omega_rad_s").get<double>()),
                         Complex(o.at("re").get<double>(), o.at("im").get<double>())});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::parse, "sample " + std::to_string(k) + ": " + e.what());
    }
  }
  return FrequencyDataset(std::move(samples));
}

FrequencyDataset load_json(const std::filesystem::path& path) {
  return parse_json(read_text(path));
}

void save_json(const FrequencyDataset& d, const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : d.samples()) {
    if (s.z.real() != 0.0) {
      throw Error(ErrorKind::argument, "only imaginary-axis points can be written as JSON");
    }
    j.push_back({{"omega_rad_s", s.z.imag()}, {"re", s.phi.real()}, {"im", s.phi.imag()}});
  }
  write_text(path, j.dump(2) + "\n");
}

}  // namespace loewner_lab
