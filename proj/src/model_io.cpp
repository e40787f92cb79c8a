#include "blockfade/model_io.hpp"

#include <fstream>
#include <sstream>

#include "blockfade/highsnr.hpp"
#include "blockfade/unit_energy.hpp"

namespace blockfade {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what, const std::string& ptr) {
  throw ModelParseError(what, ptr.empty() ? "/" : ptr);
}

const json& field(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object() || !j.contains(key)) fail("model: missing field '" + key + "'", ptr);
  return j.at(key);
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) fail("model: expected a number", ptr);
  return j.get<double>();
}

double number_field(const json& j, const std::string& key, const std::string& ptr) {
  return number(field(j, key, ptr), ptr + "/" + key);
}

int int_field(const json& j, const std::string& key, const std::string& ptr) {
  const json& v = field(j, key, ptr);
  if (!v.is_number_integer()) fail("model: expected an integer", ptr + "/" + key);
  return v.get<int>();
}

cplx complex_value(const json& j, const std::string& ptr) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], ptr + "/0"), number(j[1], ptr + "/1")};
  if (j.is_object() && j.contains("re"))
    return {number(j.at("re"), ptr + "/re"), j.contains("im") ? number(j.at("im"), ptr + "/im") : 0.0};
  fail("model: expected a complex value (number, [re, im] or {re, im})", ptr);
}

cplx complex_field(const json& j, const std::string& key, const std::string& ptr) {
  return complex_value(field(j, key, ptr), ptr + "/" + key);
}

CMatrix matrix_value(const json& j, int T, const std::string& ptr) {
  if (!j.is_array() || static_cast<int>(j.size()) != T) fail("model: expected " + std::to_string(T) + " rows", ptr);
  CMatrix m(T, T);
  for (int r = 0; r < T; ++r) {
    const json& row = j[r];
    const std::string rp = ptr + "/" + std::to_string(r);
    if (!row.is_array() || static_cast<int>(row.size()) != T)
      fail("model: expected " + std::to_string(T) + " columns", rp);
    for (int c = 0; c < T; ++c) m(r, c) = complex_value(row[c], rp + "/" + std::to_string(c));
  }
  return m;
}

std::vector<CMatrix> matrix_list(const json& j, int T, const std::string& ptr) {
  if (!j.is_array() || j.empty()) fail("model: expected a nonempty list of matrices", ptr);
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matrix_value(j[i], T, ptr + "/" + std::to_string(i)));
  return out;
}

ScalarPiecewiseSpectrum piecewise(const json& j, const std::string& ptr) {
  const json& segs = field(j, "segments", ptr);
  if (!segs.is_array() || segs.empty()) fail("model: 'segments' must be a nonempty list", ptr + "/segments");
  std::vector<Segment> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const json& s = segs[i];
    const std::string sp = ptr + "/segments/" + std::to_string(i);
    if (s.is_array() && s.size() == 3)
      out.push_back({number(s[0], sp + "/0"), number(s[1], sp + "/1"), number(s[2], sp + "/2")});
    else if (s.is_object())
      out.push_back({number_field(s, "lo", sp), number_field(s, "hi", sp), number_field(s, "level", sp)});
    else
      fail("model: a segment is [lo, hi, level] or {lo, hi, level}", sp);
  }
  if (j.value("normalize", false)) {
    double mass = 0.0;
    for (const auto& s : out) mass += s.level * (s.hi - s.lo) / kPi;
    if (!(mass > 0.0)) fail("model: cannot normalize a spectrum with zero mass", ptr);
    for (auto& s : out) s.level /= mass;
  }
  return ScalarPiecewiseSpectrum(std::move(out), j.value("norm_tol", 1e-12));
}

SpectralModel build(const json& j, const std::string& ptr) {
  if (!j.is_object()) fail("model: expected an object", ptr);
  const json& k = field(j, "kind", ptr);
  if (!k.is_string()) fail("model: 'kind' must be a string", ptr + "/kind");
  const std::string kind = k.get<std::string>();
  if (kind == "flat") return SpectralModel::scalar(flat_spectrum());
  if (kind == "scalar_gauss_markov") return SpectralModel::scalar_gauss_markov(complex_field(j, "rho", ptr));
  if (kind == "block_gauss_markov") {
    const int T = int_field(j, "T", ptr);
    const cplx r1 = complex_field(j, "rho1", ptr), r2 = complex_field(j, "rho2", ptr);
    if (j.contains("max_lag"))
      return SpectralModel::from_correlation(
          block_gauss_markov_correlation(T, r1, r2, int_field(j, "max_lag", ptr)));
    return SpectralModel::block_gauss_markov(T, r1, r2);
  }
  if (kind == "piecewise") return SpectralModel::scalar(piecewise(j, ptr));
  if (kind == "correlation") {
    const int T = int_field(j, "T", ptr);
    return SpectralModel::from_correlation(CorrelationSequence(T, matrix_list(field(j, "lags", ptr), T, ptr + "/lags")));
  }
  if (kind == "constant_within_block")
    return SpectralModel::constant_within_block(int_field(j, "T", ptr), build(field(j, "base", ptr), ptr + "/base"));
  if (kind == "s_theta")
    return SpectralModel::scalar(s_theta_family(number_field(j, "alpha", ptr), number_field(j, "theta", ptr)));
  if (kind == "worst_case") return SpectralModel::scalar(worst_case_spectrum(number_field(j, "alpha", ptr)));
  if (kind == "two_level")
    return SpectralModel::scalar(two_level_spectrum(number_field(j, "eps1", ptr), number_field(j, "eps2", ptr),
                                                    number_field(j, "alpha1", ptr), number_field(j, "alpha2", ptr)));
  if (kind == "explicit_grid") {
    const int T = int_field(j, "T", ptr);
    const json& om = field(j, "omegas", ptr);
    if (!om.is_array()) fail("model: 'omegas' must be a list", ptr + "/omegas");
    std::vector<double> omegas;
    for (std::size_t i = 0; i < om.size(); ++i) omegas.push_back(number(om[i], ptr + "/omegas/" + std::to_string(i)));
    return SpectralModel::explicit_grid(T, omegas, matrix_list(field(j, "mats", ptr), T, ptr + "/mats"));
  }
  if (kind == "example5") return example5_model(complex_field(j, "rho", ptr));
  fail("model: unknown kind '" + kind + "'", ptr + "/kind");
}

}  // namespace

SpectralModel model_from_json(const json& j) { return build(j, ""); }

SpectralModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelParseError(std::string("model: malformed JSON: ") + e.what(), "byte " + std::to_string(e.byte));
  }
  return model_from_json(j);
}

SpectralModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace blockfade
