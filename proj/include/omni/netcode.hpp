#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "omni/constraints.hpp"
#include "omni/gf256.hpp"

namespace omni {

using CodingVector = std::vector<std::uint8_t>;

/// Row space over GF(2^8) kept in reduced row echelon form, so a vector is
/// in the space exactly when reducing it by the pivot rows leaves zero.
class RowSpace {
 public:
  explicit RowSpace(std::size_t dimension) : dim_(dimension), pivot_row_(dimension, -1) {}

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return rows_.size(); }

  /// Adds v to the span; returns false when v was already in it.
  bool insert(CodingVector v) {
    reduce(v);
    std::size_t lead = 0;
    while (lead < dim_ && v[lead] == 0) ++lead;
    if (lead == dim_) return false;
    const std::uint8_t scale = gf256::inv(v[lead]);
    for (std::size_t j = lead; j < dim_; ++j) v[j] = gf256::mul(v[j], scale);
    for (auto& row : rows_) {
      const std::uint8_t f = row[lead];
      if (f == 0) continue;
      for (std::size_t j = lead; j < dim_; ++j) row[j] ^= gf256::mul(f, v[j]);
    }
    pivot_row_[lead] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(v));
    return true;
  }

  bool contains(CodingVector v) const {
    reduce(v);
    for (auto x : v)
      if (x) return false;
    return true;
  }

  /// Whether the unit vector of `column` lies in the span.
  bool contains_unit(std::size_t column) const {
    CodingVector e(dim_, 0);
    e[column] = 1;
    return contains(std::move(e));
  }

  /// Uniformly random element of the span (possibly zero).
  template <class Rng>
  CodingVector random_element(Rng& rng) const {
    CodingVector out(dim_, 0);
    std::uint64_t pool = 0;
    int left = 0;
    for (const auto& row : rows_) {
      if (left == 0) {
        pool = rng();
        left = 8;
      }
      const auto coef = static_cast<std::uint8_t>(pool & 0xFF);
      pool >>= 8;
      --left;
      if (coef == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        if (row[j]) out[j] ^= gf256::mul(coef, row[j]);
    }
    return out;
  }

 private:
  void reduce(CodingVector& v) const {
    for (std::size_t col = 0; col < dim_; ++col) {
      if (v[col] == 0 || pivot_row_[col] < 0) continue;
      const std::uint8_t f = v[col];
      const auto& row = rows_[static_cast<std::size_t>(pivot_row_[col])];
      for (std::size_t j = col; j < dim_; ++j) v[j] ^= gf256::mul(f, row[j]);
    }
  }

  std::size_t dim_;
  std::vector<CodingVector> rows_;
  std::vector<int> pivot_row_;
};

/// True iff every target unit vector lies in the span of `rows`.
inline bool can_decode(std::span<const CodingVector> rows, std::span<const std::size_t> targets, std::size_t dimension) {
  RowSpace space(dimension);
  for (const auto& r : rows) {
    if (r.size() != dimension) throw Error(ErrorCode::InvalidArgument, "coding vector has wrong length");
    space.insert(r);
  }
  for (auto t : targets) {
    if (t >= dimension) throw Error(ErrorCode::InvalidArgument, "target index outside the coding space");
    if (!space.contains_unit(t)) return false;
  }
  return true;
}

/// Chunks per packet needed to send every rate as a whole number of chunks:
/// the least common multiple of the rate denominators.
inline std::int64_t chunk_granularity(const RateMatrix& rates) {
  mpz_class l = 1;
  for (int r = 0; r < rates.rounds(); ++r)
    for (int i = 0; i < rates.users(); ++i) l = lcm(l, rates.at(r, i).get_den());
  if (!l.fits_slong_p()) throw Error(ErrorCode::TooLarge, "chunk granularity overflows");
  return l.get_si();
}

struct UserOutcome {
  int user = 0;
  bool achieved = false;
};

struct SimReport {
  Mode mode = Mode::Slo;
  std::int64_t chunks_per_packet = 1;
  /// Per round, one entry per target user of that round.
  std::vector<std::vector<UserOutcome>> rounds;
  /// Chunks sent by each user in each round.
  std::vector<std::vector<std::int64_t>> transmissions;
  /// Rank of each user's knowledge after each round.
  std::vector<std::vector<std::size_t>> ranks;

  bool round_achieved(std::size_t l) const {
    for (const auto& o : rounds.at(l))
      if (!o.achieved) return false;
    return true;
  }
  bool all_achieved() const {
    for (std::size_t l = 0; l < rounds.size(); ++l)
      if (!round_achieved(l)) return false;
    return true;
  }
};

/// Broadcast simulation of random linear network coding at the given rates.
///
/// Every packet is cut into `chunks` pieces (0 means chunk_granularity(rates));
/// only coefficient vectors are tracked. In each round users take turns in
/// index order, one coded chunk per turn, until each has sent its quota of
/// rate * chunks. A coded chunk is a uniformly random combination of the
/// sender's current knowledge and reaches every other user. After round l
/// each user of group l is checked for decodability of its target: group l's
/// collection (local) or every packet (global).
inline SimReport simulate_exchange(const Instance& inst, const RateMatrix& rates, Mode mode, std::uint64_t seed,
                                   std::int64_t chunks = 0) {
  if (rates.rounds() != inst.rounds() || rates.users() != inst.n())
    throw Error(ErrorCode::InvalidArgument, "rate matrix shape does not match the instance");
  if (!rates.all_nonnegative()) throw Error(ErrorCode::InvalidArgument, "rates must be nonnegative");
  const std::int64_t c = chunks > 0 ? chunks : chunk_granularity(rates);

  SimReport report;
  report.mode = mode;
  report.chunks_per_packet = c;
  report.transmissions.assign(static_cast<std::size_t>(inst.rounds()), std::vector<std::int64_t>(static_cast<std::size_t>(inst.n()), 0));
  for (int l = 0; l < inst.rounds(); ++l) {
    for (int i = 0; i < inst.n(); ++i) {
      const Rational scaled = rates.at(l, i) * c;
      if (!is_integer(scaled))
        throw Error(ErrorCode::NonIntegralTransmission,
                    "rate " + to_fraction_string(rates.at(l, i)) + " is not a whole number of chunks at " +
                        std::to_string(c) + " chunks per packet");
      report.transmissions[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] = scaled.get_num().get_si();
    }
  }

  const std::size_t dim = static_cast<std::size_t>(inst.k()) * static_cast<std::size_t>(c);
  auto chunk_columns = [&](const PacketSet& packets) {
    std::vector<std::size_t> cols;
    for (auto x : packets.elements())
      for (std::int64_t h = 0; h < c; ++h) cols.push_back(x * static_cast<std::size_t>(c) + static_cast<std::size_t>(h));
    return cols;
  };

  std::vector<RowSpace> knowledge;
  knowledge.reserve(static_cast<std::size_t>(inst.n()));
  for (int i = 0; i < inst.n(); ++i) {
    RowSpace space(dim);
    for (auto col : chunk_columns(inst.holdings(i))) {
      CodingVector e(dim, 0);
      e[col] = 1;
      space.insert(std::move(e));
    }
    knowledge.push_back(std::move(space));
  }

  std::mt19937_64 rng(seed);
  for (int l = 0; l < inst.rounds(); ++l) {
    auto quota = report.transmissions[static_cast<std::size_t>(l)];
    bool pending = true;
    while (pending) {
      pending = false;
      for (int i = 0; i < inst.n(); ++i) {
        auto& left = quota[static_cast<std::size_t>(i)];
        if (left == 0) continue;
        const CodingVector coded = knowledge[static_cast<std::size_t>(i)].random_element(rng);
        for (int j = 0; j < inst.n(); ++j)
          if (j != i) knowledge[static_cast<std::size_t>(j)].insert(coded);
        --left;
        pending = pending || left > 0;
      }
    }
    const auto targets = chunk_columns(mode == Mode::Slo ? inst.collective_packets(l) : inst.collective_packets(inst.rounds() - 1));
    std::vector<UserOutcome> outcome;
    for (int i = 0; i < inst.group_size(l); ++i) {
      bool ok = true;
      for (auto t : targets) {
        if (!knowledge[static_cast<std::size_t>(i)].contains_unit(t)) {
          ok = false;
          break;
        }
      }
      outcome.push_back({i, ok});
    }
    report.rounds.push_back(std::move(outcome));
    std::vector<std::size_t> ranks;
    for (const auto& k : knowledge) ranks.push_back(k.rank());
    report.ranks.push_back(std::move(ranks));
  }
  return report;
}

}  // namespace omni
