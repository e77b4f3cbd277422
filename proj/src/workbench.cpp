#include "reftor/workbench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace reftor {

namespace {

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

void require_odd_degree(int d, const char* where) {
  if (d < 1 || d % 2 == 0) throw ValidationError(std::string(where) + ": d must be odd and >= 1");
}

// One line in each listed degree, zero differential and zero gamma.
Instance lines(int d, const std::vector<int>& degrees) {
  Instance out = empty_instance(d);
  for (int j : degrees) out.complex.dims.dims[j] += 1;
  for (int j = 0; j < d; ++j) {
    out.complex.partial[j] = Matrix::Zero(out.complex.dim(j + 1), out.complex.dim(j));
  }
  for (int j = 0; j <= d; ++j) {
    out.chirality.gamma[j] = Matrix::Zero(out.complex.dim(d - j), out.complex.dim(j));
  }
  return out;
}

struct Generated {
  Instance instance;
  std::vector<int> betti;
};

Generated generate(std::uint64_t seed, int d, const Profile& profile) {
  require_odd_degree(d, "gen_random");
  if (profile.blocks < 0 || profile.harmonic_pairs < 0) {
    throw ValidationError("gen_random: negative block count");
  }
  const int r = (d + 1) / 2;
  Rng rng(seed);
  Generated g{empty_instance(d), std::vector<int>(d + 1, 0)};
  for (int b = 0; b < profile.blocks; ++b) {
    const int j = rng.uniform_int(0, r - 1);
    const Scalar z = rng.complex_in_annulus(0.5, 3.0);
    g.instance = direct_sum(g.instance, gen_elementary(d, j, z));
  }
  for (int h = 0; h < profile.harmonic_pairs; ++h) {
    const int k = rng.uniform_int(0, r - 1);
    g.instance = direct_sum(g.instance, harmonic_pair(d, k));
    g.betti[k] += 1;
    g.betti[d - k] += 1;
  }
  std::vector<Matrix> p, pinv;
  for (int j = 0; j <= d; ++j) {
    const int n = g.instance.complex.dim(j);
    const Matrix u = random_unitary(rng, n);
    if (profile.unitary) {
      p.push_back(u);
      pinv.push_back(u.adjoint());
      continue;
    }
    const Matrix v = random_unitary(rng, n);
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s(i) = rng.uniform(1.0, 10.0);
    p.push_back(u * s.cast<Scalar>().asDiagonal() * v.adjoint());
    pinv.push_back(v * s.cwiseInverse().cast<Scalar>().asDiagonal() * u.adjoint());
  }
  CochainComplex& c = g.instance.complex;
  ChiralityOp& gm = g.instance.chirality;
  for (int j = 0; j < d; ++j) c.partial[j] = p[j + 1] * c.partial[j] * pinv[j];
  for (int j = 0; j <= d; ++j) gm.gamma[j] = p[d - j] * gm.gamma[j] * pinv[j];
  return g;
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) throw ValidationError("to_json: non-finite entry");
  if (v == 0.0) v = 0.0;  // drop the sign of zero
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void write_matrix(std::string& out, const Matrix& m) {
  out += '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i > 0) out += ',';
    out += '[';
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k > 0) out += ',';
      out += '[';
      write_number(out, m(i, k).real());
      out += ',';
      write_number(out, m(i, k).imag());
      out += ']';
    }
    out += ']';
  }
  out += ']';
}

void write_matrix_list(std::string& out, const std::vector<Matrix>& ms) {
  out += '[';
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i > 0) out += ',';
    write_matrix(out, ms[i]);
  }
  out += ']';
}

Matrix parse_matrix(const nlohmann::json& j, int rows, int cols, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw ValidationError(what + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ValidationError(what + ": row " + std::to_string(i) + " must have " +
                            std::to_string(cols) + " entries");
    }
    for (int k = 0; k < cols; ++k) {
      const auto& e = row[static_cast<std::size_t>(k)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ValidationError(what + ": entries must be [re, im] pairs");
      }
      m(i, k) = Scalar(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

}  // namespace

Instance empty_instance(int d) {
  if (d < 0) throw ValidationError("instance: negative degree");
  Instance out;
  out.complex.dims = GradedDims{d, std::vector<int>(d + 1, 0)};
  out.complex.partial.assign(d, Matrix(0, 0));
  out.chirality.gamma.assign(d + 1, Matrix(0, 0));
  return out;
}

Instance direct_sum(const Instance& a, const Instance& b) {
  if (a.complex.d() != b.complex.d()) throw ValidationError("direct sum: degree mismatch");
  Instance out;
  out.complex.dims = direct_sum(a.complex.dims, b.complex.dims);
  for (int j = 0; j < a.complex.d(); ++j) {
    out.complex.partial.push_back(block_diag(a.complex.partial[j], b.complex.partial[j]));
  }
  for (int j = 0; j <= a.complex.d(); ++j) {
    out.chirality.gamma.push_back(block_diag(a.chirality.gamma[j], b.chirality.gamma[j]));
  }
  return out;
}

Instance harmonic_pair(int d, int k) {
  require_odd_degree(d, "harmonic_pair");
  if (k < 0 || k > d) throw ValidationError("harmonic_pair: degree out of range");
  Instance out = lines(d, {k, d - k});
  out.chirality.gamma[k](0, 0) = 1.0;
  out.chirality.gamma[d - k](0, 0) = 1.0;
  return out;
}

Instance gen_elementary(int d, int j, Scalar z, int placement) {
  require_odd_degree(d, "gen_elementary");
  const int r = (d + 1) / 2;
  if (j < 0 || j >= r) throw ValidationError("gen_elementary: requires 0 <= j < r");
  if (z == Scalar(0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw ValidationError("gen_elementary: z must be a nonzero finite number");
  }
  if (placement < -1 || placement > d) {
    throw ValidationError("gen_elementary: placement out of range");
  }
  Instance out;
  if (j == r - 1) {
    // degrees j and j + 1 = d - j mirror each other
    out = lines(d, {j, j + 1});
    out.complex.partial[j](0, 0) = z;
    out.chirality.gamma[j](0, 0) = 1.0;
    out.chirality.gamma[j + 1](0, 0) = 1.0;
  } else {
    out = lines(d, {j, j + 1, d - j - 1, d - j});
    out.complex.partial[j](0, 0) = z;
    out.complex.partial[d - j - 1](0, 0) = z;
    for (int k : {j, j + 1, d - j - 1, d - j}) out.chirality.gamma[k](0, 0) = 1.0;
  }
  if (placement >= 0) out = direct_sum(out, harmonic_pair(d, placement));
  return out;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) throw ValidationError("uniform_int: empty range");
  const double span = static_cast<double>(hi - lo + 1);
  const int k = lo + static_cast<int>(std::floor(uniform() * span));
  return std::min(k, hi);
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Scalar Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

Scalar Rng::complex_in_annulus(double rmin, double rmax) {
  const double rad = uniform(rmin, rmax);
  const double phase = uniform(-kPi, kPi);
  return std::polar(rad, phase);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  // splitmix64 finaliser over a combined word
  std::uint64_t x = base ^ (stream * 0x9E3779B97F4A7C15ULL) ^ (index * 0xD1B54A32D192ED03ULL);
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Matrix random_unitary(Rng& rng, int n) {
  if (n == 0) return Matrix(0, 0);
  Matrix g(n, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) g(i, k) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

Instance gen_random(std::uint64_t seed, int d, const Profile& profile) {
  return generate(seed, d, profile).instance;
}

std::vector<int> profile_betti(std::uint64_t seed, int d, const Profile& profile) {
  return generate(seed, d, profile).betti;
}

std::string to_json(const ComplexDocument& doc) {
  validate(doc.complex);
  if (doc.chirality) validate(doc.complex, *doc.chirality);
  std::string out = "{\"d\":" + std::to_string(doc.complex.d()) + ",\"dims\":[";
  for (int j = 0; j <= doc.complex.d(); ++j) {
    if (j > 0) out += ',';
    out += std::to_string(doc.complex.dim(j));
  }
  out += "],\"differential\":";
  write_matrix_list(out, doc.complex.partial);
  if (doc.chirality) {
    out += ",\"chirality\":";
    write_matrix_list(out, doc.chirality->gamma);
  }
  out += ",\"metadata\":{";
  bool first = true;
  for (const auto& [k, v] : doc.metadata) {
    if (!first) out += ',';
    first = false;
    out += nlohmann::json(k).dump() + ':' + nlohmann::json(v).dump();
  }
  out += "}}";
  return out;
}

ComplexDocument from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw ValidationError("document must be a JSON object");
    if (!j.contains("d") || !j["d"].is_number_integer()) {
      throw ValidationError("document: missing integer field d");
    }
    if (!j.contains("dims") || !j["dims"].is_array()) {
      throw ValidationError("document: missing dims list");
    }
    ComplexDocument doc;
    doc.complex.dims.d = j["d"].get<int>();
    for (const auto& v : j["dims"]) {
      if (!v.is_number_integer()) throw ValidationError("document: dims must be integers");
      doc.complex.dims.dims.push_back(v.get<int>());
    }
    validate(doc.complex.dims);
    const int d = doc.complex.d();
    const auto& diff = j.value("differential", nlohmann::json::array());
    if (!diff.is_array() || static_cast<int>(diff.size()) != d) {
      throw ValidationError("document: expected " + std::to_string(d) + " differentials");
    }
    for (int k = 0; k < d; ++k) {
      doc.complex.partial.push_back(parse_matrix(diff[static_cast<std::size_t>(k)],
                                                 doc.complex.dim(k + 1), doc.complex.dim(k),
                                                 "differential " + std::to_string(k)));
    }
    validate(doc.complex);
    if (j.contains("chirality") && !j["chirality"].is_null()) {
      const auto& ch = j["chirality"];
      if (!ch.is_array() || static_cast<int>(ch.size()) != d + 1) {
        throw ValidationError("document: expected " + std::to_string(d + 1) + " chirality blocks");
      }
      ChiralityOp g;
      for (int k = 0; k <= d; ++k) {
        g.gamma.push_back(parse_matrix(ch[static_cast<std::size_t>(k)], doc.complex.dim(d - k),
                                       doc.complex.dim(k), "chirality " + std::to_string(k)));
      }
      validate(doc.complex, g);
      doc.chirality = g;
    }
    if (j.contains("metadata")) {
      const auto& md = j["metadata"];
      if (!md.is_object()) throw ValidationError("document: metadata must be an object");
      for (const auto& [k, v] : md.items()) {
        if (!v.is_string()) throw ValidationError("document: metadata values must be strings");
        doc.metadata[k] = v.get<std::string>();
      }
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("document: ") + e.what());
  }
}

ComplexDocument read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace reftor
