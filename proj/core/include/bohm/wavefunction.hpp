#pragma once

// Multi-particle wave functions built as complex-weighted sums of product
// terms over basis states. Stored structurally and evaluated pointwise.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "bohm/basis.hpp"
#include "bohm/measures.hpp"

namespace bohm {

struct ProductTerm {
  cdouble coefficient{1.0, 0.0};
  std::vector<BasisState> factors;  // one per particle

  friend bool operator==(const ProductTerm&, const ProductTerm&) = default;
};

/// Particle coordinates flattened as (x1, y1[, z1], x2, ...) plus time.
/// Time only matters for non-stationary superpositions.
struct Configuration {
  std::vector<double> coordinates;
  double time = 0.0;
};

struct FieldEval {
  cdouble psi;
  std::vector<cdouble> grad;  // d psi / d coordinates[i]
  double abs2 = 0.0;
};

class WaveFunction {
 public:
  /// Validates and compiles the term list. Throws ValidationError on an
  /// empty list, inconsistent particle counts or dimensions, a particle
  /// mixing box and oscillator states, or all-zero coefficients.
  static WaveFunction build(std::vector<ProductTerm> terms);

  int particles() const { return particles_; }
  int dimension() const { return dimension_; }
  int configuration_size() const { return particles_ * dimension_; }
  const std::vector<ProductTerm>& terms() const { return terms_; }

  /// Common total energy of all terms, when they agree within 1e-12.
  std::optional<double> stationary_energy() const { return stationary_energy_; }
  bool stationary() const { return stationary_energy_.has_value(); }
  double term_energy(std::size_t i) const { return term_energies_[i]; }

  PotentialKind particle_potential(int particle) const { return potentials_[particle]; }

  /// Total external potential sum_k V_k(x_k).
  double potential(std::span<const double> coordinates) const;

  /// Allocation-free evaluation into a caller-owned FieldEval whose grad is
  /// already sized. Returns false outside the domain (box walls).
  bool evaluate_into(std::span<const double> coordinates, double time, FieldEval& out) const;

  /// Same as above with only the value.
  bool value_into(std::span<const double> coordinates, double time, cdouble& psi) const;

  /// Same wave function with every coefficient multiplied by `factor`.
  WaveFunction scaled(cdouble factor) const;

 private:
  WaveFunction() = default;

  std::vector<ProductTerm> terms_;
  std::vector<double> term_energies_;
  std::optional<double> stationary_energy_;
  int particles_ = 0;
  int dimension_ = 0;
  std::vector<PotentialKind> potentials_;

  // Distinct (particle, state) pairs; term_slots_[t * particles + k] indexes them.
  std::vector<BasisFunction> functions_;
  std::vector<int> function_particle_;
  std::vector<int> term_slots_;
};

inline WaveFunction build(std::vector<ProductTerm> terms) { return WaveFunction::build(std::move(terms)); }

/// Coefficients scaled so sum |c_i|^2 = 1. Assumes distinct orthonormal
/// product terms. Throws ValidationError for a zero-norm state.
WaveFunction normalize(const WaveFunction& wf);

/// psi, its gradient and |psi|^2. Throws DomainError outside the domain.
FieldEval evaluate(const WaveFunction& wf, const Configuration& q);

/// The 2x2x2 tensor with |0> -> basis0 and |1> -> basis1 on every
/// particle. Throws ValidationError for a factor outside {basis0, basis1}
/// or a particle count other than 3. Repeated terms accumulate.
ThreeQubitState qubit_coefficients(const WaveFunction& wf, const BasisState& basis0, const BasisState& basis1);

/// Coefficient vector of the terms as an expansion over distinct product
/// states (unnormalized; labels are the product-state names).
CoefficientVector coefficient_vector(const WaveFunction& wf);

}  // namespace bohm
