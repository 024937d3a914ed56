#include "dpskit/json_io.hpp"

#include <json.hpp>

namespace dpskit {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::parse_error, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) fail(ErrorCode::parse_error, std::string(what) + " must be a number");
  return j.get<double>();
}

RealMatrix real_matrix(const json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(ErrorCode::parse_error, std::string(what) + " must have " + std::to_string(n) + " rows");
  RealMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(ErrorCode::parse_error, std::string(what) + " row " + std::to_string(r) + " has the wrong length");
    for (int c = 0; c < n; ++c) m(r, c) = number(row[c], what);
  }
  return m;
}

RealVector real_vector(const json& j, int n, const char* what) {
  if (!j.is_array() || (n >= 0 && static_cast<int>(j.size()) != n))
    fail(ErrorCode::parse_error, std::string(what) + " has the wrong length");
  RealVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = number(j[i], what);
  return v;
}

HermitianOperator operator_from(const json& j) {
  const json& jd = field(j, "dims");
  if (!jd.is_array() || jd.empty()) fail(ErrorCode::parse_error, "dims must be a nonempty array");
  Dims dims;
  for (const auto& d : jd) {
    if (!d.is_number_integer() || d.get<int>() < 1) fail(ErrorCode::parse_error, "dims must be positive integers");
    dims.push_back(d.get<int>());
  }
  const auto n = product(dims);
  if (n > 1 << 14) fail(ErrorCode::parse_error, "operator too large");
  const int side = static_cast<int>(n);
  const RealMatrix re = real_matrix(field(j, "re"), side, "re");
  const RealMatrix im = j.contains("im") ? real_matrix(j.at("im"), side, "im") : RealMatrix::Zero(side, side);
  Matrix m(side, side);
  m.real() = re;
  m.imag() = im;
  try {
    return HermitianOperator(std::move(dims), std::move(m));
  } catch (const Error& e) {
    fail(ErrorCode::parse_error, e.what());
  }
}

json operator_json(const HermitianOperator& x) {
  const int n = x.side();
  json re = json::array(), im = json::array();
  for (int r = 0; r < n; ++r) {
    json rr = json::array(), ri = json::array();
    for (int c = 0; c < n; ++c) {
      rr.push_back(x(r, c).real());
      ri.push_back(x(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"dims", x.dims()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

}  // namespace

HermitianOperator operator_from_json(const std::string& text) { return operator_from(parse(text)); }

std::string operator_to_json(const HermitianOperator& x) { return operator_json(x).dump(); }

EstimationProblem problem_from_json(const std::string& text) {
  const json j = parse(text);
  const json& ens = field(j, "ensemble");
  if (!ens.is_array() || ens.empty()) fail(ErrorCode::parse_error, "ensemble must be a nonempty array");
  EstimationProblem p;
  for (const auto& e : ens) {
    EnsembleEntry entry;
    entry.p = number(field(e, "p"), "p");
    entry.encoded = operator_from(field(e, "encoded"));
    const json& src = field(e, "source");
    const RealVector re = real_vector(field(src, "re"), -1, "source.re");
    const RealVector im = src.contains("im") ? real_vector(src.at("im"), static_cast<int>(re.size()), "source.im")
                                             : RealVector::Zero(re.size());
    entry.source.resize(re.size());
    entry.source.real() = re;
    entry.source.imag() = im;
    p.ensemble.push_back(std::move(entry));
  }
  try {
    p.validate();
  } catch (const Error& e) {
    fail(ErrorCode::parse_error, e.what());
  }
  return p;
}

std::string problem_to_json(const EstimationProblem& p) {
  json ens = json::array();
  for (const auto& e : p.ensemble) {
    std::vector<double> re(e.source.size()), im(e.source.size());
    for (int i = 0; i < e.source.size(); ++i) {
      re[i] = e.source(i).real();
      im[i] = e.source(i).imag();
    }
    ens.push_back({{"p", e.p}, {"encoded", operator_json(e.encoded)}, {"source", {{"re", re}, {"im", im}}}});
  }
  return json{{"ensemble", std::move(ens)}}.dump();
}

std::string certify_to_json(const CertifyResult& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["N"] = r.N;
  j["ranks"] = json::array();
  if (r.profile) j["ranks"] = {r.profile->rank_full, r.profile->rank_left, r.profile->rank_right};
  j["witness"] = r.witness ? operator_json(*r.witness) : json(nullptr);
  if (r.witness) j["witness_value"] = r.witness_value;
  if (r.profile) j["K"] = r.profile->K;
  return j.dump();
}

}  // namespace dpskit
