#include "bohm/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "bohm/error.hpp"

namespace bohm {
namespace {

constexpr std::size_t kStackFunctions = 16;
constexpr double kStationaryTol = 1e-12;

std::string term_name(std::size_t index) { return "term " + std::to_string(index); }

}  // namespace

WaveFunction WaveFunction::build(std::vector<ProductTerm> terms) {
  if (terms.empty()) throw ValidationError("wave function needs at least one term");
  WaveFunction wf;
  wf.particles_ = static_cast<int>(terms.front().factors.size());
  if (wf.particles_ == 0) throw ValidationError(term_name(0) + ": no factors");
  wf.dimension_ = terms.front().factors.front().dimension();
  wf.potentials_.resize(wf.particles_);
  for (int k = 0; k < wf.particles_; ++k)
    wf.potentials_[k] = potential_kind(terms.front().factors[k].family());

  bool any_nonzero = false;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& term = terms[t];
    if (static_cast<int>(term.factors.size()) != wf.particles_) {
      throw ValidationError(term_name(t) + ": expected " + std::to_string(wf.particles_) + " factors");
    }
    if (!std::isfinite(term.coefficient.real()) || !std::isfinite(term.coefficient.imag())) {
      throw ValidationError(term_name(t) + ": non-finite coefficient");
    }
    if (term.coefficient != 0.0) any_nonzero = true;
    double e = 0.0;
    for (int k = 0; k < wf.particles_; ++k) {
      const auto& f = term.factors[k];
      if (f.dimension() != wf.dimension_) {
        throw ValidationError(term_name(t) + ": " + f.label() + " has inconsistent dimension");
      }
      if (potential_kind(f.family()) != wf.potentials_[k]) {
        throw ValidationError(term_name(t) + ": particle " + std::to_string(k + 1) +
                              " mixes box and oscillator states");
      }
      e += energy(f);
    }
    wf.term_energies_.push_back(e);
  }
  if (!any_nonzero) throw ValidationError("all coefficients are zero");

  const double e0 = wf.term_energies_.front();
  const bool stationary = std::all_of(wf.term_energies_.begin(), wf.term_energies_.end(), [e0](double e) {
    return std::abs(e - e0) <= kStationaryTol * std::max(1.0, std::abs(e0));
  });
  if (stationary) wf.stationary_energy_ = e0;

  wf.term_slots_.resize(terms.size() * wf.particles_);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    for (int k = 0; k < wf.particles_; ++k) {
      const auto& state = terms[t].factors[k];
      int slot = -1;
      for (std::size_t i = 0; i < wf.functions_.size(); ++i) {
        if (wf.function_particle_[i] == k && wf.functions_[i].state() == state) {
          slot = static_cast<int>(i);
          break;
        }
      }
      if (slot < 0) {
        slot = static_cast<int>(wf.functions_.size());
        wf.functions_.emplace_back(state);
        wf.function_particle_.push_back(k);
      }
      wf.term_slots_[t * wf.particles_ + k] = slot;
    }
  }
  wf.terms_ = std::move(terms);
  return wf;
}

double WaveFunction::potential(std::span<const double> coordinates) const {
  double v = 0.0;
  for (int k = 0; k < particles_; ++k) {
    v += bohm::potential(potentials_[k], coordinates.subspan(static_cast<std::size_t>(k * dimension_), dimension_));
  }
  return v;
}

bool WaveFunction::evaluate_into(std::span<const double> x, double time, FieldEval& out) const {
  const std::size_t nf = functions_.size();
  std::array<PointEval, kStackFunctions> stack;
  std::vector<PointEval> heap;
  PointEval* f = stack.data();
  if (nf > kStackFunctions) {
    heap.resize(nf);
    f = heap.data();
  }
  for (std::size_t i = 0; i < nf; ++i) {
    const auto p = x.subspan(static_cast<std::size_t>(function_particle_[i] * dimension_), dimension_);
    if (!functions_[i].eval(p, f[i])) return false;
  }

  const int n = particles_;
  const int d = dimension_;
  out.psi = 0.0;
  std::fill(out.grad.begin(), out.grad.end(), cdouble(0.0));
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    cdouble c = terms_[t].coefficient;
    if (!stationary_energy_) c *= std::polar(1.0, -term_energies_[t] * time);
    const int* slots = &term_slots_[t * n];
    cdouble product = c;
    for (int k = 0; k < n; ++k) product *= f[slots[k]].value;
    out.psi += product;
    for (int k = 0; k < n; ++k) {
      cdouble others = c;
      for (int j = 0; j < n; ++j)
        if (j != k) others *= f[slots[j]].value;
      for (int a = 0; a < d; ++a) out.grad[k * d + a] += others * f[slots[k]].gradient[a];
    }
  }
  out.abs2 = std::norm(out.psi);
  return true;
}

bool WaveFunction::value_into(std::span<const double> x, double time, cdouble& psi) const {
  const std::size_t nf = functions_.size();
  std::array<cdouble, kStackFunctions> stack;
  std::vector<cdouble> heap;
  cdouble* v = stack.data();
  if (nf > kStackFunctions) {
    heap.resize(nf);
    v = heap.data();
  }
  PointEval tmp;
  for (std::size_t i = 0; i < nf; ++i) {
    const auto p = x.subspan(static_cast<std::size_t>(function_particle_[i] * dimension_), dimension_);
    if (!functions_[i].eval(p, tmp)) return false;
    v[i] = tmp.value;
  }
  psi = 0.0;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    cdouble c = terms_[t].coefficient;
    if (!stationary_energy_) c *= std::polar(1.0, -term_energies_[t] * time);
    for (int k = 0; k < particles_; ++k) c *= v[term_slots_[t * particles_ + k]];
    psi += c;
  }
  return true;
}

WaveFunction WaveFunction::scaled(cdouble factor) const {
  WaveFunction copy = *this;
  for (auto& t : copy.terms_) t.coefficient *= factor;
  return copy;
}

WaveFunction normalize(const WaveFunction& wf) {
  double n2 = 0.0;
  for (const auto& t : wf.terms()) n2 += std::norm(t.coefficient);
  if (!(n2 > 0.0)) throw ValidationError("cannot normalize a zero-norm state");
  return wf.scaled(1.0 / std::sqrt(n2));
}

FieldEval evaluate(const WaveFunction& wf, const Configuration& q) {
  if (static_cast<int>(q.coordinates.size()) != wf.configuration_size()) {
    throw DomainError("evaluate: configuration has " + std::to_string(q.coordinates.size()) +
                      " coordinates, expected " + std::to_string(wf.configuration_size()));
  }
  FieldEval out;
  out.grad.resize(q.coordinates.size());
  if (!wf.evaluate_into(q.coordinates, q.time, out)) {
    throw DomainError("evaluate: configuration outside the domain");
  }
  return out;
}

ThreeQubitState qubit_coefficients(const WaveFunction& wf, const BasisState& basis0, const BasisState& basis1) {
  if (wf.particles() != 3) throw ValidationError("qubit_coefficients needs exactly 3 particles");
  if (basis0 == basis1) throw ValidationError("qubit_coefficients: |0> and |1> must differ");
  ThreeQubitState s;
  for (std::size_t t = 0; t < wf.terms().size(); ++t) {
    const auto& term = wf.terms()[t];
    int bits[3];
    for (int k = 0; k < 3; ++k) {
      const auto& f = term.factors[k];
      if (f == basis0) {
        bits[k] = 0;
      } else if (f == basis1) {
        bits[k] = 1;
      } else {
        throw ValidationError(term_name(t) + ": factor " + f.label() + " is neither |0> nor |1>");
      }
    }
    s(bits[0], bits[1], bits[2]) += term.coefficient;
  }
  return s;
}

CoefficientVector coefficient_vector(const WaveFunction& wf) {
  // Merge repeated product terms so the entries refer to distinct basis products.
  std::map<std::string, cdouble> merged;
  std::vector<std::string> order;
  for (const auto& term : wf.terms()) {
    std::string key;
    for (const auto& f : term.factors) key += f.label();
    auto [it, inserted] = merged.try_emplace(key, 0.0);
    if (inserted) order.push_back(key);
    it->second += term.coefficient;
  }
  CoefficientVector v;
  for (const auto& key : order) {
    v.entries.push_back(merged[key]);
    v.labels.push_back(key);
  }
  return v;
}

}  // namespace bohm
