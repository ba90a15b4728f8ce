#pragma once

// JSON documents.
//
//   matrix   {"dim": n, "re": [[...]], "im": [[...]]}            (row major)
//   density  matrix + {"type": "density"}
//   channel  {"dim": n, "convention": "dagger-left", "kraus": [matrix, ...]}
//            ("dagger-right" operators K are stored as V = K^dagger)
//   choi     matrix of size n^2 + {"type": "choi", "n": n}
//   superop  {"type": "superop", "n": n, "basis": "hermitian", "matrix": [[...]]}
//   ball map {"type": "affine_ball", "A": [[...]], "b": [...]}

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "posmaps/ballmaps.hpp"
#include "posmaps/channels.hpp"
#include "posmaps/extremality.hpp"
#include "posmaps/states.hpp"
#include "posmaps/wigner.hpp"

namespace posmaps {

using json = nlohmann::json;

inline constexpr const char* kToolName = "posmaps";
inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed document; the message names the offending field.
class FormatError : public InputError {
 public:
  using InputError::InputError;
};

namespace io {

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw FormatError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(where + ": missing field '" + key + "'");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw FormatError(where + ": expected a number");
  return j.get<double>();
}

inline RealMatrix real_rows(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw FormatError(where + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw FormatError(where + "[0]: expected an array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  RealMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw FormatError(rw + ": expected " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = number(row[static_cast<size_t>(c)], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline json real_rows_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json vector_json(const RealVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json complex_vector_json(const ComplexVector& v) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v[i].real());
    im.push_back(v[i].imag());
  }
  return {{"re", re}, {"im", im}};
}

}  // namespace io

inline json to_json(const ComplexMatrix& m) {
  return {{"dim", m.rows()}, {"re", io::real_rows_json(m.real())}, {"im", io::real_rows_json(m.imag())}};
}

/// Reads a square complex matrix; `expected_dim` (if positive) is enforced.
inline ComplexMatrix matrix_from_json(const json& j, const std::string& where = "matrix", int expected_dim = 0) {
  const json& dj = io::field(j, "dim", where);
  if (!dj.is_number_integer() || dj.get<long>() <= 0) throw FormatError(where + ".dim: expected a positive integer");
  const int dim = dj.get<int>();
  if (expected_dim > 0 && dim != expected_dim) {
    throw FormatError(where + ".dim: got " + std::to_string(dim) + ", expected " + std::to_string(expected_dim));
  }
  const RealMatrix re = io::real_rows(io::field(j, "re", where), where + ".re");
  const RealMatrix im = j.contains("im") ? io::real_rows(j["im"], where + ".im") : RealMatrix::Zero(re.rows(), re.cols());
  for (const RealMatrix* part : {&re, &im}) {
    if (part->rows() != dim || part->cols() != dim) {
      throw FormatError(where + ": declared dim " + std::to_string(dim) + " but data is " +
                        std::to_string(part->rows()) + "x" + std::to_string(part->cols()));
    }
  }
  ComplexMatrix m(dim, dim);
  m.real() = re;
  m.imag() = im;
  return m;
}

inline json to_json(const HermitianOp& h) { return to_json(h.matrix()); }

inline json to_json(const DensityState& rho) {
  json j = to_json(rho.matrix());
  j["type"] = "density";
  return j;
}

inline DensityState density_from_json(const json& j) {
  if (!j.contains("type") || j["type"] != "density") throw FormatError("density: missing {\"type\": \"density\"} tag");
  return DensityState(HermitianOp(matrix_from_json(j, "density")));
}

inline json to_json(const KrausChannel& ch) {
  json ops = json::array();
  for (const auto& v : ch.ops()) ops.push_back(to_json(v));
  return {{"dim", ch.dim()}, {"convention", "dagger-left"}, {"kraus", ops}};
}

inline KrausChannel channel_from_json(const json& j) {
  const json& dj = io::field(j, "dim", "channel");
  if (!dj.is_number_integer() || dj.get<long>() <= 0) throw FormatError("channel.dim: expected a positive integer");
  const int n = dj.get<int>();
  DaggerConvention conv = DaggerConvention::Left;
  if (j.contains("convention")) {
    const std::string c = j["convention"].is_string() ? j["convention"].get<std::string>() : "";
    if (c == "dagger-right") conv = DaggerConvention::Right;
    else if (c != "dagger-left") throw FormatError("channel.convention: expected \"dagger-left\" or \"dagger-right\"");
  }
  const json& ks = io::field(j, "kraus", "channel");
  if (!ks.is_array() || ks.empty()) throw FormatError("channel.kraus: expected a non-empty array");
  std::vector<ComplexMatrix> ops;
  for (size_t i = 0; i < ks.size(); ++i) ops.push_back(matrix_from_json(ks[i], "channel.kraus[" + std::to_string(i) + "]", n));
  return KrausChannel(std::move(ops), conv);
}

inline json to_json(const ChoiMatrix& c) {
  json j = to_json(c.matrix());
  j["type"] = "choi";
  j["n"] = c.dim();
  return j;
}

inline ChoiMatrix choi_from_json(const json& j) {
  const json& dj = io::field(j, "dim", "choi");
  if (!dj.is_number_integer() || dj.get<long>() <= 0) throw FormatError("choi.dim: expected a positive integer");
  const int dim = dj.get<int>();
  int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
  if (j.contains("n")) {
    if (!j["n"].is_number_integer()) throw FormatError("choi.n: expected an integer");
    n = j["n"].get<int>();
  }
  if (n <= 0 || n * n != dim) {
    throw FormatError("choi: matrix dim " + std::to_string(dim) + " does not match expected n^2 = " +
                      std::to_string(n * n));
  }
  const ComplexMatrix m = matrix_from_json(j, "choi", n * n);
  try {
    return ChoiMatrix(n, HermitianOp(m));
  } catch (const InputError& e) {
    throw FormatError(std::string("choi: invariant 'Hermitian' failed: ") + e.what());
  }
}

inline json to_json(const SuperOpMatrix& s) {
  return {{"type", "superop"}, {"n", s.dim()}, {"basis", "hermitian"}, {"matrix", io::real_rows_json(s.matrix())}};
}

inline SuperOpMatrix superop_from_json(const json& j) {
  const json& nj = io::field(j, "n", "superop");
  if (!nj.is_number_integer() || nj.get<long>() <= 0) throw FormatError("superop.n: expected a positive integer");
  const int n = nj.get<int>();
  if (j.contains("basis") && j["basis"] != "hermitian") throw FormatError("superop.basis: only \"hermitian\" is supported");
  RealMatrix m = io::real_rows(io::field(j, "matrix", "superop"), "superop.matrix");
  if (m.rows() != n * n || m.cols() != n * n) {
    throw FormatError("superop.matrix: expected " + std::to_string(n * n) + "x" + std::to_string(n * n) + " entries");
  }
  return SuperOpMatrix(n, std::move(m));
}

inline json to_json(const AffineBallMap& phi) {
  return {{"type", "affine_ball"}, {"A", io::real_rows_json(phi.linear())}, {"b", io::vector_json(phi.offset())}};
}

inline AffineBallMap ball_map_from_json(const json& j) {
  RealMatrix a = io::real_rows(io::field(j, "A", "affine_ball"), "affine_ball.A");
  const json& bj = io::field(j, "b", "affine_ball");
  if (!bj.is_array()) throw FormatError("affine_ball.b: expected an array");
  RealVector b(static_cast<Eigen::Index>(bj.size()));
  for (size_t i = 0; i < bj.size(); ++i) b[static_cast<Eigen::Index>(i)] = io::number(bj[i], "affine_ball.b[" + std::to_string(i) + "]");
  return AffineBallMap(std::move(a), std::move(b));
}

using OperatorFile = std::variant<KrausChannel, ChoiMatrix, SuperOpMatrix>;

/// Dispatches on the "type" tag (absent or "channel" means a Kraus channel).
inline OperatorFile operator_file_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("document: expected a JSON object");
  const std::string type = j.contains("type") && j["type"].is_string() ? j["type"].get<std::string>() : "channel";
  if (type == "channel") return channel_from_json(j);
  if (type == "choi") return choi_from_json(j);
  if (type == "superop") return superop_from_json(j);
  throw FormatError("document.type: unsupported type '" + type + "'");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline OperatorFile parse_channel_file(const std::string& path) {
  const json j = read_json_file(path);
  try {
    return operator_file_from_json(j);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  } catch (const InputError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const PureState& p) { return io::complex_vector_json(p.vector()); }

inline json to_json(const ExtremalityReport& r) {
  return {{"mode", to_string(r.mode)},
          {"extreme", r.extreme},
          {"gram_rank", r.gram_rank},
          {"gram_size", r.gram_size},
          {"min_singular_value", r.min_singular_value}};
}

inline json to_json(const PureImageWitness& w) {
  return {{"input", to_json(w.input)}, {"image", to_json(w.image)}, {"image_trace", w.image_trace}, {"residual", w.residual}};
}

inline json to_json(const PureImageResult& r) {
  json ws = json::array();
  for (const auto& w : r.witnesses) ws.push_back(to_json(w));
  return {{"witnesses", ws},
          {"witness_count", r.witnesses.size()},
          {"best_residual", r.best_residual},
          {"annihilated", r.annihilated},
          {"restarts", r.restarts},
          {"seed", r.seed}};
}

inline json to_json(const Theorem5Report& r) {
  json ws = json::array();
  for (const auto& w : r.witnesses) ws.push_back(to_json(w));
  return {{"cond_a_inverse_cp", r.cond_a_inverse_cp},
          {"cond_b_single_invertible_kraus", r.cond_b_single_invertible_kraus},
          {"cond_de_rank_one_images", r.cond_de_rank_one_images},
          {"cond_de_not_found_within_budget", r.cond_de_not_found_within_budget},
          {"witnesses", ws},
          {"consistent", r.consistent}};
}

inline json to_json(const FixExtremeCertificate& c) {
  return {{"pure_image_count", c.pure_image_count},
          {"image_affine_rank", c.image_affine_rank},
          {"certified", c.certified},
          {"best_residual", c.search.best_residual},
          {"restarts", c.search.restarts},
          {"seed", c.search.seed}};
}

inline json to_json(const WignerClassification& w) {
  json j = {{"branch", to_string(w.branch)},
            {"residuals", {{"orthogonality", w.orthogonality_residual}}},
            {"seed", w.seed}};
  j["U"] = w.recovered_u ? to_json(*w.recovered_u) : json(nullptr);
  if (w.recovered_u) j["residuals"]["unitarity"] = unitarity_residual(*w.recovered_u);
  j["positivity_witness"] = w.positivity_witness ? to_json(*w.positivity_witness) : json(nullptr);
  return j;
}

inline json to_json(const ContactReport& c) {
  json pts = json::array(), cl = json::array();
  for (const auto& p : c.contact_points) pts.push_back(io::vector_json(p));
  for (const auto& p : c.clusters) cl.push_back(io::vector_json(p));
  return {{"contact_points", pts},
          {"clusters", cl},
          {"affine_rank", c.affine_rank},
          {"is_orthogonal", c.is_orthogonal},
          {"max_norm", c.max_norm}};
}

inline json to_json(const PlanarReport& p) {
  return {{"f_concave", p.f_concave},
          {"f_ge_alpha_g_everywhere", p.f_ge_alpha_g_everywhere},
          {"min_value", p.min_value},
          {"argmin", p.argmin},
          {"max_second_difference", p.max_second_difference},
          {"t_swaps_endpoints", p.t_swaps_endpoints}};
}

}  // namespace posmaps
