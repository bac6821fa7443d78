#include "aiq/entropy.hpp"

#include <algorithm>

#include "aiq/codec.hpp"

namespace aiq::entropy {

StateCatalog::StateCatalog(std::vector<StateEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty())
    throw std::invalid_argument("state catalog: no entries");
  qubits_ = entries_.front().state.qubits();
  Rat total(0);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const StateEntry& e = entries_[i];
    if (e.id.empty())
      throw std::invalid_argument("state catalog: empty id");
    if (e.state.qubits() != qubits_)
      throw std::invalid_argument("state catalog: mixed qubit counts");
    if (e.weight < 0)
      throw std::invalid_argument("state catalog: negative weight");
    total += e.weight;
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[j].id == e.id)
        throw std::invalid_argument("state catalog: duplicate id " + e.id);
      if (entries_[j].code == e.code)
        throw std::invalid_argument("state catalog: duplicate code");
    }
  }
  if (total > 1) throw quantum::WeightOverflow();
}

const StateEntry* StateCatalog::find(const std::string& id) const {
  for (const StateEntry& e : entries_)
    if (e.id == id) return &e;
  return nullptr;
}

quantum::SemiDensity StateCatalog::aggregate() const {
  std::vector<std::pair<quantum::PureState, Rat>> parts;
  parts.reserve(entries_.size());
  for (const StateEntry& e : entries_) parts.emplace_back(e.state, e.weight);
  return quantum::mixed_state_aggregate(dim(), parts);
}

CircuitCatalog::CircuitCatalog(std::vector<CircuitEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty())
    throw std::invalid_argument("circuit catalog: no entries");
  total_qubits_ = entries_.front().circuit.total_qubits();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const CircuitEntry& e = entries_[i];
    if (e.id.empty())
      throw std::invalid_argument("circuit catalog: empty id");
    if (e.circuit.total_qubits() != total_qubits_)
      throw std::invalid_argument("circuit catalog: mixed qubit counts");
    if (e.weight < 0)
      throw std::invalid_argument("circuit catalog: negative weight");
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[j].id == e.id)
        throw std::invalid_argument("circuit catalog: duplicate id " + e.id);
      if (entries_[j].code == e.code)
        throw std::invalid_argument("circuit catalog: duplicate code");
    }
  }
}

const CircuitEntry* CircuitCatalog::find(const std::string& id) const {
  for (const CircuitEntry& e : entries_)
    if (e.id == id) return &e;
  return nullptr;
}

StateCatalog build_state_catalog(
    const std::vector<std::pair<std::string, quantum::PureState>>& states,
    const machine::UniverseSnapshot& snap, const std::string& aux_id) {
  std::vector<StateEntry> entries;
  entries.reserve(states.size());
  for (const auto& [id, state] : states) {
    BitString code = quantum::encode_state(state);
    Rat weight = snap.m_hat(code, aux_id);
    if (weight == 0)
      throw std::invalid_argument(
          "state catalog: no mass for " + id +
          "; enumerate with its literal program planted");
    entries.push_back({id, state, std::move(code), std::move(weight)});
  }
  return StateCatalog(std::move(entries));
}

CircuitCatalog build_circuit_catalog(
    const std::vector<std::pair<std::string, quantum::Circuit>>& circuits,
    const machine::UniverseSnapshot& snap, const std::string& aux_id) {
  std::vector<CircuitEntry> entries;
  entries.reserve(circuits.size());
  for (const auto& [id, circuit] : circuits) {
    BitString code = quantum::encode_circuit(circuit);
    Rat weight = snap.m_hat(code, aux_id);
    if (weight == 0)
      throw std::invalid_argument(
          "circuit catalog: no mass for " + id +
          "; enumerate with its literal program planted");
    entries.push_back({id, circuit, std::move(code), std::move(weight)});
  }
  return CircuitCatalog(std::move(entries));
}

Bits hg(const quantum::PureState& psi, const StateCatalog& cat) {
  Rat sum(0);
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const StateEntry& e = cat.at(i);
    sum += e.weight * quantum::fidelity(psi, e.state);
  }
  if (sum == 0) return Bits::infinity();
  return Bits::neg_log(sum);
}

ValueWitness hv(const quantum::PureState& psi, const StateCatalog& cat) {
  ValueWitness best{Bits::infinity(), ""};
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const StateEntry& e = cat.at(i);
    Rat fid = quantum::fidelity(psi, e.state);
    if (fid == 0) continue;
    Bits cand = Bits::make(static_cast<long>(e.code.size()), fid);
    if (cand < best.value) best = {cand, e.id};
  }
  return best;
}

ValueWitness hc(const quantum::PureState& psi, const CircuitCatalog& cat) {
  ValueWitness best{Bits::infinity(), ""};
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const CircuitEntry& e = cat.at(i);
    Rat overlap = quantum::best_input_overlap(e.circuit, psi).value;
    if (overlap == 0) continue;
    Bits cand = Bits::make(
        static_cast<long>(e.code.size()) + e.circuit.data_qubits, overlap);
    if (cand < best.value) best = {cand, e.id};
  }
  return best;
}

Rat nth_unit_rational(std::size_t n) {
  if (n == 0) return Rat(1);
  // position n in breadth-first order below 1/2; the binary digits of n
  // past the leading 1 steer left (0) or right (1) through the mediants
  Int pos(static_cast<unsigned long>(n));
  Int lo_n = 0, lo_d = 1, hi_n = 1, hi_d = 1;
  Int cur_n = 1, cur_d = 2;
  long top = static_cast<long>(floor_log2(Rat(pos)));
  for (long b = top - 1; b >= 0; --b) {
    bool right = mpz_tstbit(pos.get_mpz_t(), static_cast<mp_bitcnt_t>(b));
    if (right) {
      lo_n = cur_n;
      lo_d = cur_d;
    } else {
      hi_n = cur_n;
      hi_d = cur_d;
    }
    cur_n = lo_n + hi_n;
    cur_d = lo_d + hi_d;
  }
  Rat r(cur_n, cur_d);
  r.canonicalize();  // mediants are already reduced; this is a no-op
  return r;
}

std::pair<std::size_t, std::size_t> enc_pair(std::size_t index,
                                             std::size_t catalog_size) {
  if (catalog_size == 0)
    throw std::invalid_argument("enc_pair: empty catalog");
  std::size_t d = 0;
  for (;;) {
    std::size_t count = std::min(d + 1, catalog_size);
    if (index < count) return {index, d - index};
    index -= count;
    ++d;
  }
}

bool enc_bit(const quantum::PureState& psi, const StateCatalog& cat,
             std::size_t index) {
  auto [i, j] = enc_pair(index, cat.size());
  return quantum::fidelity(psi, cat.at(i).state) >= nth_unit_rational(j);
}

BitString enc_record(const quantum::PureState& psi, const StateCatalog& cat,
                     std::size_t index) {
  auto [i, j] = enc_pair(index, cat.size());
  bool bit =
      quantum::fidelity(psi, cat.at(i).state) >= nth_unit_rational(j);
  BitString answer;
  answer.push_back(bit);
  return codec::encode_tuple(
      {cat.at(i).code, codec::encode_rational(nth_unit_rational(j)), answer});
}

BitString enc_stream(const quantum::PureState& psi, const StateCatalog& cat,
                     std::size_t records) {
  BitString out;
  for (std::size_t t = 0; t < records; ++t)
    out.append(enc_record(psi, cat, t));
  return out;
}

BitString enc_prefix(const quantum::PureState& psi, const StateCatalog& cat,
                     std::size_t bits) {
  BitString out;
  for (std::size_t t = 0; out.size() < bits; ++t)
    out.append(enc_record(psi, cat, t));
  return out.prefix(bits);
}

BitString transform_enc(const quantum::CMatrix& v,
                        const quantum::PureState& psi,
                        const StateCatalog& cat, std::size_t records) {
  if (v.dim() != cat.dim())
    throw std::invalid_argument("transform_enc: dimension mismatch");
  if (!v.is_unitary())
    throw std::invalid_argument("transform_enc: matrix is not unitary");
  // resolve each reference once: entry k(i) holds the same ray as v* theta_i
  std::vector<std::size_t> pulled_back(cat.size());
  quantum::CMatrix vadj = v.adjoint();
  for (std::size_t i = 0; i < cat.size(); ++i) {
    quantum::PureState pulled =
        quantum::PureState::ray(vadj.apply(cat.at(i).state.amps()));
    bool found = false;
    for (std::size_t k = 0; k < cat.size(); ++k) {
      if (quantum::fidelity(cat.at(k).state, pulled) == 1) {
        pulled_back[i] = k;
        found = true;
        break;
      }
    }
    if (!found)
      throw CatalogNotClosed("transform_enc: no entry matches the pullback of " +
                             cat.at(i).id);
  }
  BitString out;
  for (std::size_t t = 0; t < records; ++t) {
    auto [i, j] = enc_pair(t, cat.size());
    Rat q = nth_unit_rational(j);
    // fidelity(v psi, theta_i) = fidelity(psi, v* theta_i): answer the
    // transformed question by reading psi's own stream
    bool bit =
        quantum::fidelity(psi, cat.at(pulled_back[i]).state) >= q;
    BitString answer;
    answer.push_back(bit);
    out.append(codec::encode_tuple(
        {cat.at(i).code, codec::encode_rational(q), answer}));
  }
  return out;
}

quantum::PureState embedded_run_ray(const BitString& bits, long qubits,
                                    std::size_t run_len) {
  if (run_len == 0)
    throw std::invalid_argument("embedded_run_ray: empty runs");
  std::size_t dim = std::size_t{1} << qubits;
  if (dim * run_len > bits.size())
    throw std::invalid_argument("embedded_run_ray: not enough bits");
  quantum::CVec amps(dim);
  Int base = pow2z(static_cast<long>(run_len) + 1);
  for (std::size_t n = 0; n < dim; ++n) {
    BitString run = bits.substr(n * run_len, run_len);
    amps[n] = quantum::ComplexRat(Rat(base + 2 * run.value()), Rat(0));
  }
  return quantum::PureState::ray(std::move(amps));
}

}  // namespace aiq::entropy
