#include "meixner/nc_partitions.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace meixner {

NCPartition::NCPartition(int m, std::vector<Block> blocks) : m_(m), blocks_(std::move(blocks)) {
    if (m < 0) throw std::invalid_argument("partition size must be non-negative");
    std::vector<int> owner(static_cast<std::size_t>(m) + 1, 0);
    for (const Block& b : blocks_) {
        if (b.first < 1 || b.last > m || b.first > b.last)
            throw std::invalid_argument("block outside [m] or unsorted");
        if (owner[static_cast<std::size_t>(b.first)]++ != 0) throw std::invalid_argument("blocks overlap");
        if (b.is_pair() && owner[static_cast<std::size_t>(b.last)]++ != 0)
            throw std::invalid_argument("blocks overlap");
    }
    for (int e = 1; e <= m; ++e)
        if (owner[static_cast<std::size_t>(e)] == 0) throw std::invalid_argument("blocks do not cover [m]");
    std::sort(blocks_.begin(), blocks_.end(), [](const Block& x, const Block& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        for (std::size_t k = i + 1; k < blocks_.size(); ++k) {
            const Block& p = blocks_[i];
            const Block& r = blocks_[k];
            if (p.is_pair() && r.is_pair() && p.first < r.first && r.first < p.last && p.last < r.last)
                throw std::invalid_argument("pairs cross");
        }
    }
    compute_depths();
}

void NCPartition::compute_depths() {
    const std::size_t n = blocks_.size();
    depth_.assign(n, 1);
    nearest_outer_.assign(n, std::nullopt);
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t o = 0; o < n; ++o) {
            const Block& outer = blocks_[o];
            if (o == b || !outer.is_pair()) continue;
            if (outer.first < blocks_[b].first && blocks_[b].last < outer.last) {
                ++depth_[b];
                // The innermost enclosing pair has the largest left leg.
                if (!nearest_outer_[b] || blocks_[*nearest_outer_[b]].first < outer.first) nearest_outer_[b] = o;
            }
        }
    }
}

std::string NCPartition::to_string() const {
    std::ostringstream out;
    for (const Block& b : blocks_) {
        out << '{' << b.first;
        if (b.is_pair()) out << ',' << b.last;
        out << '}';
    }
    out << " | d=";
    for (std::size_t i = 0; i < depth_.size(); ++i) out << (i ? "," : "") << depth_[i];
    return out.str();
}

DepthCensus depth_census(const NCPartition& p) {
    DepthCensus census;
    for (std::size_t i = 0; i < p.blocks().size(); ++i) {
        const bool outer = p.depth(i) == 1;
        if (p.blocks()[i].is_pair())
            ++(outer ? census.pairs_outer : census.pairs_inner);
        else
            ++(outer ? census.singletons_outer : census.singletons_inner);
    }
    return census;
}

namespace {

// Recursion on the smallest uncovered element. `pending` holds the intervals
// still to fill, the one with the smallest elements on top.
class Enumerator {
public:
    Enumerator(int m, bool allow_singletons, const PartitionVisitor& visit)
        : m_(m), allow_singletons_(allow_singletons), visit_(visit) {}

    void run() {
        if (m_ > 0) pending_.push_back({1, m_});
        step();
    }

private:
    void step() {
        while (!pending_.empty() && pending_.back().first > pending_.back().second) pending_.pop_back();
        if (pending_.empty()) {
            visit_(NCPartition(m_, blocks_));
            return;
        }
        const auto saved = pending_;
        const auto [lo, hi] = pending_.back();
        pending_.pop_back();

        if (allow_singletons_) {
            blocks_.push_back({lo, lo});
            pending_.push_back({lo + 1, hi});
            step();
            blocks_.pop_back();
            pending_ = saved;
            pending_.pop_back();
        }
        // Pair (lo, j): the interior must itself be fillable, which for pair-only
        // partitions means even length.
        for (int j = lo + 1; j <= hi; ++j) {
            if (!allow_singletons_ && (j - lo - 1) % 2 != 0) continue;
            blocks_.push_back({lo, j});
            pending_.push_back({j + 1, hi});
            pending_.push_back({lo + 1, j - 1});
            step();
            blocks_.pop_back();
            pending_ = saved;
            pending_.pop_back();
        }
        pending_ = saved;
    }

    int m_;
    bool allow_singletons_;
    const PartitionVisitor& visit_;
    std::vector<Block> blocks_;
    std::vector<std::pair<int, int>> pending_;
};

}  // namespace

void enumerate_nc12(int m, const PartitionVisitor& visit) {
    if (m < 0 || m > kMaxNc12Size)
        throw std::out_of_range("NC^{1,2} enumeration supports 0 <= m <= " + std::to_string(kMaxNc12Size));
    Enumerator(m, true, visit).run();
}

void enumerate_nc2(int m, const PartitionVisitor& visit) {
    if (m < 0 || m > kMaxNc2Size)
        throw std::out_of_range("NC^2 enumeration supports 0 <= m <= " + std::to_string(kMaxNc2Size));
    if (m % 2 != 0) return;
    Enumerator(m, false, visit).run();
}

double moment_combinatorial(const JacobiParams& j, int m) {
    double sum = 0.0;
    enumerate_nc12(m, [&](const NCPartition& p) {
        double weight = 1.0;
        for (std::size_t b = 0; b < p.blocks().size(); ++b) {
            const auto d = static_cast<std::size_t>(p.depth(b));
            weight *= p.blocks()[b].is_pair() ? j.beta(d) : j.alpha(d);
        }
        sum += weight;
    });
    return sum;
}

MomentTable moments_combinatorial(const JacobiParams& j, int m_max) {
    if (m_max < 0) throw std::invalid_argument("m_max must be non-negative");
    MomentTable table;
    table.method = MomentMethod::combinatorial;
    for (int m = 0; m <= m_max; ++m) table.moments.push_back(moment_combinatorial(j, m));
    return table;
}

}  // namespace meixner
