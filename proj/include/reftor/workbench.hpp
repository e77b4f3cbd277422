#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "reftor/torsion.hpp"

namespace reftor {

struct Instance {
  CochainComplex complex;
  ChiralityOp chirality;
};

Instance direct_sum(const Instance& a, const Instance& b);

// Complex of top degree d with all C^j = 0.
Instance empty_instance(int d);

// Acyclic block z : C^j -> C^{j+1} with its mirror z : C^{d-j-1} -> C^{d-j},
// gamma pairing the four lines by 1 (a single pair when j = r - 1). A
// placement k in [0, d] adds a harmonic line in degrees k and d - k paired by
// gamma; -1 adds none.
Instance gen_elementary(int d, int j, Scalar z, int placement = -1);

// Harmonic lines in degrees k and d - k with zero differential.
Instance harmonic_pair(int d, int k);

// Seeded generator: mt19937_64, uniform doubles from the top 53 bits,
// normals by Box-Muller. Streams depend only on the seed and the libm used
// for log and cos.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi);  // inclusive
  double normal();
  Scalar complex_normal();
  Scalar complex_in_annulus(double rmin, double rmax);

 private:
  std::mt19937_64 engine_;
};

// Stateless seed mixing for per-case seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

// Haar-like unitary from the QR of a complex Gaussian matrix.
Matrix random_unitary(Rng& rng, int n);

struct Profile {
  int blocks = 2;
  int harmonic_pairs = 0;
  bool unitary = false;
};

// Direct sum of elementary blocks (random degree, |z| in [0.5, 3]) and
// harmonic pairs, conjugated degreewise by P_j = U diag(s) V^* with s in
// [1, 10], or by a unitary P_j when profile.unitary is set.
Instance gen_random(std::uint64_t seed, int d, const Profile& profile);

// Expected betti numbers of gen_random(seed, d, profile).
std::vector<int> profile_betti(std::uint64_t seed, int d, const Profile& profile);

struct ComplexDocument {
  CochainComplex complex;
  std::optional<ChiralityOp> chirality;
  std::map<std::string, std::string> metadata;
};

// Canonical form: fixed key order, no whitespace, numbers with 17
// significant digits, complex entries as [re, im], matrices row-major.
std::string to_json(const ComplexDocument& doc);

// Throws ValidationError on malformed JSON or an invalid complex.
ComplexDocument from_json(const std::string& text);

ComplexDocument read_document(const std::string& path);

}  // namespace reftor
