#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meixner/jacobi.hpp"

namespace meixner {

/// Block of a partition of [m]; elements are 1-based and a singleton has
/// first == last.
struct Block {
    int first = 0;
    int last = 0;

    bool is_pair() const { return first != last; }
    bool operator==(const Block&) const = default;
};

/// Non-crossing partition of [m] into singletons and pairs with block depths
/// and nearest outer blocks.
///
/// Blocks are stored sorted by their smallest element. Depths are derived from
/// the blocks by a direct nesting scan, never by the enumerator, so the two
/// cannot hide each other's bugs.
class NCPartition {
public:
    NCPartition() = default;

    /// Validates that `blocks` partition [m] into non-crossing singletons and
    /// pairs, then computes depths. Throws std::invalid_argument otherwise.
    NCPartition(int m, std::vector<Block> blocks);

    int size() const { return m_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    int depth(std::size_t block) const { return depth_[block]; }
    const std::vector<int>& depths() const { return depth_; }
    std::optional<std::size_t> nearest_outer(std::size_t block) const { return nearest_outer_[block]; }

    /// "{1,8}{2,5}{3,4}{6,7} | d=1,2,3,2"
    std::string to_string() const;

private:
    void compute_depths();

    int m_ = 0;
    std::vector<Block> blocks_;
    std::vector<int> depth_;
    std::vector<std::optional<std::size_t>> nearest_outer_;
};

/// Number of blocks of each depth class: singletons of depth 1 and deeper,
/// pairs of depth 1 and deeper.
struct DepthCensus {
    int singletons_outer = 0;
    int singletons_inner = 0;
    int pairs_outer = 0;
    int pairs_inner = 0;

    bool operator==(const DepthCensus&) const = default;
};

DepthCensus depth_census(const NCPartition& p);

using PartitionVisitor = std::function<void(const NCPartition&)>;

inline constexpr int kMaxNc12Size = 16;
inline constexpr int kMaxNc2Size = 20;

/// Streams every element of NC^{1,2}_m exactly once.
///
/// Order: the smallest uncovered element is a singleton first, then paired
/// with j for increasing j, the interior of a pair being filled before the
/// elements after it. Throws std::out_of_range for m outside [0, 16].
void enumerate_nc12(int m, const PartitionVisitor& visit);

/// Streams the pair-only partitions NC^2_m in the same order. Odd m yields an
/// empty stream; m outside [0, 20] throws std::out_of_range.
void enumerate_nc2(int m, const PartitionVisitor& visit);

/// Sum over NC^{1,2}_m of prod alpha_{depth(singleton)} * prod beta_{depth(pair)}.
/// Serial enumeration order is the reference summation order.
double moment_combinatorial(const JacobiParams& j, int m);

MomentTable moments_combinatorial(const JacobiParams& j, int m_max);

}  // namespace meixner
