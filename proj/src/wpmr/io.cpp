#include "wpmr/io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace wpmr::io {

static_assert(std::endian::native == std::endian::little,
              "dataset container assumes a little-endian host");

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {
constexpr char kB64[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(std::span<const unsigned char> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(kB64[(v >> 18) & 63]);
    out.push_back(kB64[(v >> 12) & 63]);
    out.push_back(kB64[(v >> 6) & 63]);
    out.push_back(kB64[v & 63]);
  }
  const size_t rem = bytes.size() - i;
  if (rem == 1) {
    const unsigned v = bytes[i] << 16;
    out.push_back(kB64[(v >> 18) & 63]);
    out.push_back(kB64[(v >> 12) & 63]);
    out += "==";
  } else if (rem == 2) {
    const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out.push_back(kB64[(v >> 18) & 63]);
    out.push_back(kB64[(v >> 12) & 63]);
    out.push_back(kB64[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
  static const auto inv = [] {
    std::array<int, 256> t;
    t.fill(-1);
    for (int i = 0; i < 64; ++i) t[static_cast<unsigned char>(kB64[i])] = i;
    return t;
  }();
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  unsigned acc = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    const int v = inv[static_cast<unsigned char>(c)];
    if (v < 0) throw usage_error("base64: invalid character");
    acc = (acc << 6) | static_cast<unsigned>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
    }
  }
  return out;
}

std::string encode_complex(std::span<const cplx> values) {
  return base64_encode(
      {reinterpret_cast<const unsigned char*>(values.data()),
       values.size() * sizeof(cplx)});
}

std::vector<cplx> decode_complex(std::string_view b64, size_t expect) {
  auto bytes = base64_decode(b64);
  if (bytes.size() != expect * sizeof(cplx))
    throw usage_error("decode_complex: size mismatch");
  std::vector<cplx> out(expect);
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

namespace {

void append_series_payload(std::string& payload, const ComplexSeries& s) {
  const size_t bytes = s.data.size() * sizeof(cplx);
  const size_t off = payload.size();
  payload.resize(off + bytes);
  std::memcpy(payload.data() + off, s.data.data(), bytes);
}

}  // namespace

void write_dataset(const std::string& path, const Dataset& ds) {
  json header = ds.meta;
  header["schema"] = 1;
  header["kind"] = "wpmr-dataset";
  header["d"] = ds.observed.dim;
  header["dt"] = ds.observed.dt;
  header["n"] = ds.observed.n();
  header["label"] = ds.observed.label;
  json sections = json::array();
  std::string payload;
  size_t off = 0;
  sections.push_back({{"name", "observations"},
                      {"rows", ds.observed.n()},
                      {"cols", ds.observed.dim},
                      {"offset", off}});
  append_series_payload(payload, ds.observed);
  off = payload.size();
  if (ds.forcing) {
    sections.push_back({{"name", "forcing"},
                        {"rows", ds.forcing->n()},
                        {"cols", ds.forcing->dim},
                        {"offset", off}});
    append_series_payload(payload, *ds.forcing);
  }
  header["sections"] = sections;

  const std::string htext = header.dump();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw usage_error("write_dataset: cannot open " + path);
  f.write("WPDS", 4);
  const std::uint32_t hlen = static_cast<std::uint32_t>(htext.size());
  f.write(reinterpret_cast<const char*>(&hlen), 4);
  f.write(htext.data(), htext.size());
  f.write(payload.data(), payload.size());
  if (!f) throw usage_error("write_dataset: write failed for " + path);
}

Dataset read_dataset(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw usage_error("read_dataset: cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "WPDS", 4) != 0)
    throw usage_error("read_dataset: bad magic in " + path);
  std::uint32_t hlen = 0;
  f.read(reinterpret_cast<char*>(&hlen), 4);
  std::string htext(hlen, '\0');
  f.read(htext.data(), hlen);
  json header = json::parse(htext);
  std::string payload((std::istreambuf_iterator<char>(f)),
                      std::istreambuf_iterator<char>());

  Dataset ds;
  ds.meta = header;
  auto load = [&](const json& sec) {
    const long rows = sec.at("rows");
    const int cols = sec.at("cols");
    const size_t off = sec.at("offset");
    ComplexSeries s(rows, cols, header.value("dt", 1.0));
    const size_t bytes = s.data.size() * sizeof(cplx);
    if (off + bytes > payload.size())
      throw usage_error("read_dataset: truncated payload");
    std::memcpy(s.data.data(), payload.data() + off, bytes);
    return s;
  };
  for (const auto& sec : header.at("sections")) {
    if (sec.at("name") == "observations") {
      ds.observed = load(sec);
      ds.observed.label = header.value("label", "");
    } else if (sec.at("name") == "forcing") {
      ds.forcing = load(sec);
      ds.forcing->label = "forcing";
    }
  }
  if (ds.observed.dim == 0)
    throw usage_error("read_dataset: no observations section");
  return ds;
}

void write_series_csv(const std::string& path, const ComplexSeries& s) {
  std::ofstream f(path);
  if (!f) throw usage_error("write_series_csv: cannot open " + path);
  f << "t";
  for (int c = 1; c <= s.dim; ++c) f << ",re_u" << c << ",im_u" << c;
  f << "\n";
  f.precision(17);
  for (long t = 0; t < s.n(); ++t) {
    f << t * s.dt;
    for (int c = 0; c < s.dim; ++c)
      f << "," << s.at(t, c).real() << "," << s.at(t, c).imag();
    f << "\n";
  }
}

void write_model(const std::string& path, const ModelFile& mf) {
  const auto& m = mf.model;
  json j;
  j["schema"] = 1;
  j["kind"] = "wpmr-model";
  j["orders"] = {{"p", m.orders.p}, {"r", m.orders.r}};
  json pairs = json::array();
  for (const auto& [a, b] : m.cascade.pairs) pairs.push_back({a, b});
  j["cascade"] = {{"pairs", pairs}, {"margin", m.cascade.margin}};
  if (m.cascade.linear_alpha)
    j["cascade"]["linear_alpha"] = *m.cascade.linear_alpha;
  j["state_dim"] = m.state_dim;
  j["predictor_dim"] = m.predictor_dim;
  j["basis_id"] = m.basis_id;
  json wl = json::array();
  for (const auto& w : m.weights) wl.push_back(encode_complex(w));
  j["weights_b64"] = wl;
  if (m.forcing)
    j["forcing"] = {{"q", m.forcing->q},
                    {"dim", m.forcing->dim},
                    {"c_b64", encode_complex(m.forcing->c)}};
  if (m.fitted_ics) j["fitted_ics_b64"] = encode_complex(*m.fitted_ics);
  j["noise"] = {{"dim", mf.noise.dim},
                {"grid", mf.noise.grid},
                {"real_output", mf.noise.real_output},
                {"factors_b64", encode_complex(mf.noise.factors)}};
  j["provenance"] = mf.provenance;
  write_json_file(path, j);
}

ModelFile read_model(const std::string& path) {
  json j = read_json_file(path);
  if (j.value("kind", "") != "wpmr-model")
    throw usage_error("read_model: not a model file: " + path);
  ModelFile mf;
  CascadeModel& m = mf.model;
  m.orders = ModelOrders(j.at("orders").at("p"), j.at("orders").at("r"));
  std::vector<std::pair<double, double>> pairs;
  for (const auto& pr : j.at("cascade").at("pairs"))
    pairs.emplace_back(pr.at(0), pr.at(1));
  std::optional<double> lin;
  if (j.at("cascade").contains("linear_alpha"))
    lin = j.at("cascade").at("linear_alpha").get<double>();
  m.cascade = CascadeCoefficients::unchecked(
      std::move(pairs), lin, j.at("cascade").value("margin", 1e-6));
  m.state_dim = j.at("state_dim");
  m.predictor_dim = j.at("predictor_dim");
  m.basis_id = j.at("basis_id");
  for (const auto& w : j.at("weights_b64"))
    m.weights.push_back(
        decode_complex(w.get<std::string>(), m.predictor_dim));
  if (j.contains("forcing")) {
    ForcingWeights fw;
    fw.q = j["forcing"].at("q");
    fw.dim = j["forcing"].at("dim");
    fw.c = decode_complex(j["forcing"].at("c_b64").get<std::string>(),
                          static_cast<size_t>(fw.q + 1) * fw.dim);
    m.forcing = std::move(fw);
  }
  if (j.contains("fitted_ics_b64"))
    m.fitted_ics = decode_complex(
        j.at("fitted_ics_b64").get<std::string>(),
        static_cast<size_t>(m.cascade.ic_slots()) * m.state_dim);
  mf.noise.dim = j.at("noise").at("dim");
  mf.noise.grid = j.at("noise").at("grid");
  mf.noise.real_output = j.at("noise").at("real_output");
  mf.noise.factors = decode_complex(
      j.at("noise").at("factors_b64").get<std::string>(),
      static_cast<size_t>(mf.noise.grid) * mf.noise.dim * mf.noise.dim);
  mf.provenance = j.value("provenance", json::object());
  m.validate();
  return mf;
}

std::unique_ptr<PredictorBasis> basis_from_id(const std::string& id) {
  auto field = [&](const std::string& key) -> std::string {
    const std::string tag = ";" + key + "=";
    const auto pos = id.find(tag);
    if (pos == std::string::npos)
      throw usage_error("basis_from_id: missing field " + key + " in " + id);
    const auto start = pos + tag.size();
    return id.substr(start, id.find(';', start) - start);
  };
  if (id.rfind("ks/v1;", 0) == 0) {
    KsBasisOptions opt;
    opt.K = std::stoi(field("K"));
    opt.L = std::stod(field("L"));
    opt.delta = std::stod(field("delta"));
    opt.conj_partner = field("conj") == "1";
    opt.lag_one_first_factor = field("lag1") == "1";
    return std::make_unique<KsBasis>(opt);
  }
  if (id.rfind("burgers/v1;", 0) == 0) {
    BurgersBasisOptions opt;
    opt.K = std::stoi(field("K"));
    opt.nu = std::stod(field("nu"));
    opt.delta = std::stod(field("delta"));
    opt.conj_partner = field("conj") == "1";
    return std::make_unique<BurgersBasis>(opt);
  }
  throw usage_error("basis_from_id: unknown or unsupported basis '" + id +
                    "' (version mismatch?)");
}

std::vector<std::string> lineage_of(const json& meta) {
  std::vector<std::string> out;
  if (meta.contains("lineage"))
    for (const auto& h : meta["lineage"]) out.push_back(h.get<std::string>());
  return out;
}

bool lineage_compatible(const json& a, const json& b) {
  const auto la = lineage_of(a), lb = lineage_of(b);
  for (const auto& x : la)
    for (const auto& y : lb)
      if (x == y) return true;
  return la.empty() && lb.empty();
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw usage_error("cannot open " + path);
  json j;
  f >> j;
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw usage_error("cannot open " + path);
  f << j.dump(2) << "\n";
}

}  // namespace wpmr::io
