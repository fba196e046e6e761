#include "pmlda/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pmlda/errors.hpp"
#include "pmlda/image.hpp"

namespace pmlda {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) throw InputError("not a number: '" + text + "'");
  return v;
}

long long parse_int(const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) throw InputError("not an integer: '" + text + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

bool skippable(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t[0] == '#' || t.rfind("doc_id", 0) == 0;
}

std::string join(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_real(v[i]);
  }
  return out;
}

// Rows of "doc_id,word_index,values..." grouped by document, in file order.
struct IndexedRows {
  std::vector<std::vector<Vec>> docs;
};

IndexedRows read_indexed_rows(const std::filesystem::path& path, std::size_t* width_out) {
  auto in = open_in(path);
  IndexedRows rows;
  std::string line;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto cells = split_csv(line);
    if (cells.size() < 3) throw InputError(path.string() + ":" + std::to_string(line_no) + ": too few columns");
    const long long d = parse_int(cells[0]);
    const long long n = parse_int(cells[1]);
    if (width == 0) width = cells.size() - 2;
    if (cells.size() - 2 != width)
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": inconsistent column count");
    if (d < 0 || static_cast<std::size_t>(d) > rows.docs.size() ||
        (static_cast<std::size_t>(d) + 1 < rows.docs.size()))
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": doc ids must be contiguous and ordered");
    if (static_cast<std::size_t>(d) == rows.docs.size()) rows.docs.emplace_back();
    auto& doc = rows.docs[static_cast<std::size_t>(d)];
    if (n != static_cast<long long>(doc.size()))
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": word indices must be contiguous and ordered");
    Vec v(width);
    for (std::size_t i = 0; i < width; ++i) v[i] = parse_real(cells[i + 2]);
    doc.push_back(std::move(v));
  }
  if (rows.docs.empty()) throw InputError(path.string() + ": no rows");
  if (width_out) *width_out = width;
  return rows;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vec parse_real_list(const std::string& text) {
  Vec out;
  std::string token;
  for (char c : text + ",") {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!trim(token).empty()) out.push_back(parse_real(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig cfg;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InputError("config line " + std::to_string(line_no) + ": empty key");
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double KeyValueConfig::get_real(const std::string& key, double fallback) const {
  const auto v = get(key);
  return v ? parse_real(*v) : fallback;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  const auto v = get(key);
  return v ? parse_int(*v) : fallback;
}

Vec KeyValueConfig::get_reals(const std::string& key, const Vec& fallback) const {
  const auto v = get(key);
  return v ? parse_real_list(*v) : fallback;
}

void write_corpus_csv(const std::filesystem::path& path, const Corpus& corpus) {
  validate_corpus(corpus);
  auto out = open_out(path);
  out << "doc_id,word_index";
  for (std::size_t i = 0; i < corpus.front().dim(); ++i) out << ",x" << i;
  out << '\n';
  for (std::size_t d = 0; d < corpus.size(); ++d)
    for (std::size_t n = 0; n < corpus[d].size(); ++n) out << d << ',' << n << ',' << join(corpus[d].words[n]) << '\n';
}

Corpus read_corpus_csv(const std::filesystem::path& path) {
  auto rows = read_indexed_rows(path, nullptr);
  Corpus corpus(rows.docs.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) corpus[d].words = std::move(rows.docs[d]);
  validate_corpus(corpus);
  return corpus;
}

void write_memberships_csv(const std::filesystem::path& path, const WordMemberships& memberships) {
  require(!memberships.empty() && !memberships.front().empty(), "no memberships to write");
  auto out = open_out(path);
  out << "doc_id,word_index";
  for (std::size_t k = 0; k < memberships.front().front().size(); ++k) out << ",z" << k;
  out << '\n';
  for (std::size_t d = 0; d < memberships.size(); ++d)
    for (std::size_t n = 0; n < memberships[d].size(); ++n) out << d << ',' << n << ',' << join(memberships[d][n]) << '\n';
}

WordMemberships read_memberships_csv(const std::filesystem::path& path) {
  return read_indexed_rows(path, nullptr).docs;
}

WordMemberships memberships_of(const ModelState& state) {
  WordMemberships out;
  out.reserve(state.docs.size());
  for (const auto& d : state.docs) out.push_back(d.z);
  return out;
}

void write_truth_csv(const std::filesystem::path& path, const std::vector<DocState>& truth) {
  require(!truth.empty(), "no truth to write");
  const std::size_t K = truth.front().pi.size();
  auto out = open_out(path);
  out << "doc_id,word_index,s";
  for (std::size_t k = 0; k < K; ++k) out << ",pi" << k;
  for (std::size_t k = 0; k < K; ++k) out << ",z" << k;
  out << '\n';
  for (std::size_t d = 0; d < truth.size(); ++d)
    for (std::size_t n = 0; n < truth[d].z.size(); ++n)
      out << d << ',' << n << ',' << format_real(truth[d].s) << ',' << join(truth[d].pi) << ','
          << join(truth[d].z[n]) << '\n';
}

void write_layout_csv(const std::filesystem::path& path, const DocLayout& layout) {
  auto out = open_out(path);
  out << "# size " << layout.height << ' ' << layout.width << '\n';
  out << "doc_id,word_index,row,col\n";
  for (std::size_t d = 0; d < layout.docs.size(); ++d)
    for (std::size_t n = 0; n < layout.docs[d].size(); ++n)
      out << d << ',' << n << ',' << layout.docs[d][n].row << ',' << layout.docs[d][n].col << '\n';
}

DocLayout read_layout_csv(const std::filesystem::path& path) {
  DocLayout layout;
  {
    auto in = open_in(path);
    std::string first;
    std::getline(in, first);
    std::stringstream ss(first);
    std::string hash, word;
    if (ss >> hash >> word && hash == "#" && word == "size") ss >> layout.height >> layout.width;
  }
  const auto rows = read_indexed_rows(path, nullptr);
  int max_r = -1, max_c = -1;
  for (const auto& doc : rows.docs) {
    std::vector<PixelCoord> coords;
    for (const auto& v : doc) {
      if (v.size() != 2) throw InputError(path.string() + ": layout rows need row and col");
      const PixelCoord pc{static_cast<int>(v[0]), static_cast<int>(v[1])};
      max_r = std::max(max_r, pc.row);
      max_c = std::max(max_c, pc.col);
      coords.push_back(pc);
    }
    layout.docs.push_back(std::move(coords));
  }
  if (layout.height <= 0 || layout.width <= 0) {
    layout.height = max_r + 1;
    layout.width = max_c + 1;
  }
  layout.validate();
  return layout;
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
  auto out = open_out(path);
  out << "sweep,log_joint,acc_pi,acc_s,acc_z,acc_mu,acc_sigma\n";
  for (std::size_t t = 0; t < trace.log_joint_series.size(); ++t) {
    out << (t + 1) << ',' << format_real(trace.log_joint_series[t]);
    for (double r : trace.acceptance_series[t]) out << ',' << format_real(r);
    out << '\n';
  }
}

void write_state_file(const std::filesystem::path& path, const ModelState& state,
                      const std::map<std::string, std::string>& extras) {
  auto out = open_out(path);
  out << "K = " << state.topics.K() << '\n';
  out << "dim = " << state.topics.dim() << '\n';
  out << "sigma2 = " << format_real(state.topics.sigma2) << '\n';
  out << "log_joint = " << format_real(state.log_joint) << '\n';
  for (const auto& [k, v] : extras) out << k << " = " << v << '\n';
  for (std::size_t k = 0; k < state.topics.K(); ++k) out << "mean." << k << " = " << join(state.topics.means[k]) << '\n';
  out << "D = " << state.docs.size() << '\n';
  for (std::size_t d = 0; d < state.docs.size(); ++d) {
    out << "doc." << d << ".pi = " << join(state.docs[d].pi) << '\n';
    out << "doc." << d << ".s = " << format_real(state.docs[d].s) << '\n';
  }
}

ModelState read_state_file(const std::filesystem::path& path) {
  const auto cfg = KeyValueConfig::load(path);
  ModelState st;
  const auto K = cfg.get_int("K", 0);
  require(K >= 1, path.string() + ": missing K");
  st.topics.sigma2 = cfg.get_real("sigma2", 0.0);
  st.log_joint = cfg.get_real("log_joint", 0.0);
  for (long long k = 0; k < K; ++k) {
    const std::string key = "mean." + std::to_string(k);
    require(cfg.has(key), path.string() + ": missing " + key);
    st.topics.means.push_back(cfg.get_reals(key, {}));
  }
  const auto D = cfg.get_int("D", 0);
  for (long long d = 0; d < D; ++d) {
    DocState ds;
    ds.pi = cfg.get_reals("doc." + std::to_string(d) + ".pi", {});
    ds.s = cfg.get_real("doc." + std::to_string(d) + ".s", 0.0);
    st.docs.push_back(std::move(ds));
  }
  return st;
}

void write_matrix_csv(const std::filesystem::path& path, std::span<const double> values, int height, int width) {
  require(values.size() == static_cast<std::size_t>(height) * width, "matrix size mismatch");
  auto out = open_out(path);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (c) out << ',';
      out << format_real(values[static_cast<std::size_t>(r) * width + c]);
    }
    out << '\n';
  }
}

std::vector<double> read_matrix_csv(const std::filesystem::path& path, int& height, int& width) {
  auto in = open_in(path);
  std::vector<double> values;
  height = 0;
  width = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const auto cells = split_csv(line);
    if (height == 0) width = static_cast<int>(cells.size());
    if (static_cast<int>(cells.size()) != width) throw InputError(path.string() + ": ragged matrix");
    for (const auto& c : cells) values.push_back(parse_real(c));
    ++height;
  }
  if (height == 0) throw InputError(path.string() + ": empty matrix");
  return values;
}

std::vector<std::uint8_t> read_mask(const std::filesystem::path& path, int& height, int& width) {
  std::vector<std::uint8_t> mask;
  if (path.extension() == ".pgm") {
    const GrayImage img = read_pgm(path);
    height = img.height;
    width = img.width;
    for (auto v : img.pixels) mask.push_back(v != 0 ? 1 : 0);
    return mask;
  }
  for (double v : read_matrix_csv(path, height, width)) mask.push_back(v != 0.0 ? 1 : 0);
  return mask;
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& roc) {
  auto out = open_out(path);
  out << "threshold,fpr,tpr\n";
  for (std::size_t i = 0; i < roc.fpr.size(); ++i)
    out << format_real(roc.thresholds[i]) << ',' << format_real(roc.fpr[i]) << ',' << format_real(roc.tpr[i]) << '\n';
}

}  // namespace pmlda
