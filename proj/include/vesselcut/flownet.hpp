#pragma once

// Two-terminal max-flow / min-cut over sparse graphs.
//
// The solver is an augmenting-path method in the Boykov-Kolmogorov style:
// two search trees (rooted at the source and at the sink) are grown until
// they touch, the path through the contact arc is augmented, and the nodes
// cut loose by saturated arcs are re-adopted or freed. Trees are kept between
// augmentations, which is what makes it fast on pixel grids.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "vesselcut/error.hpp"

namespace vesselcut {

struct InfiniteCapacity {
    explicit constexpr InfiniteCapacity() = default;
};

/// Terminal-arc sentinel. Realized at solve time as (sum of all finite
/// capacities) + 1, which no cut through finite arcs can reach.
inline constexpr InfiniteCapacity kInfinite{};

template <typename Cap>
struct TerminalCapacity {
    Cap value{};
    bool infinite = false;

    constexpr TerminalCapacity(Cap v) : value(v) {} // NOLINT(google-explicit-constructor)
    constexpr TerminalCapacity(InfiniteCapacity) : infinite(true) {} // NOLINT(google-explicit-constructor)
};

enum class Side : std::uint8_t { Source, Sink };

template <typename Cap>
struct CutLabeling {
    std::vector<Side> labels;
    /// Maximum flow of the network as constructed (normalization offset included).
    Cap flow_value{};
    /// Part of flow_value that came from terminal normalization.
    Cap terminal_offset{};

    [[nodiscard]] bool is_source(int node) const { return labels[static_cast<std::size_t>(node)] == Side::Source; }
};

template <typename Cap = double>
class FlowNetwork {
    static_assert(std::is_arithmetic_v<Cap>, "capacities must be arithmetic");

public:
    struct Arc {
        int from = 0;
        int to = 0;
        Cap cap_forward{};
        Cap cap_backward{};
    };

    /// Terminal arcs of one node, stored net: at most one of the two finite
    /// values is nonzero, and `offset` holds the common part that was removed.
    struct Terminal {
        Cap to_source{};
        Cap to_sink{};
        Cap offset{};
        bool source_infinite = false;
        bool sink_infinite = false;
    };

    explicit FlowNetwork(int node_count = 0)
    {
        if (node_count < 0) {
            throw Error(ErrorCode::InvalidNode, "node count must be nonnegative");
        }
        terminals_.resize(static_cast<std::size_t>(node_count));
    }

    [[nodiscard]] int node_count() const noexcept { return static_cast<int>(terminals_.size()); }
    [[nodiscard]] std::size_t arc_count() const noexcept { return arcs_.size(); }
    [[nodiscard]] std::span<const Arc> arcs() const noexcept { return arcs_; }
    [[nodiscard]] std::span<const Terminal> terminals() const noexcept { return terminals_; }
    [[nodiscard]] const Terminal& terminal(int node) const { return terminals_.at(static_cast<std::size_t>(node)); }

    void reserve_arcs(std::size_t n) { arcs_.reserve(n); }

    /// Parallel arcs are allowed and behave additively.
    void add_edge(int u, int v, Cap cap_uv, Cap cap_vu)
    {
        check_node(u);
        check_node(v);
        if (u == v) {
            throw Error(ErrorCode::InvalidNode, "self-loop on node " + std::to_string(u));
        }
        check_capacity(cap_uv);
        check_capacity(cap_vu);
        arcs_.push_back(Arc{u, v, cap_uv, cap_vu});
    }

    /// Replaces the terminal arcs of `u`.
    void set_terminal(int u, TerminalCapacity<Cap> to_source, TerminalCapacity<Cap> to_sink)
    {
        check_node(u);
        if (!to_source.infinite) check_capacity(to_source.value);
        if (!to_sink.infinite) check_capacity(to_sink.value);
        if (to_source.infinite && to_sink.infinite) {
            throw Error(ErrorCode::InvalidParameter,
                        "node " + std::to_string(u) + " seeded to both terminals");
        }

        Terminal t;
        t.source_infinite = to_source.infinite;
        t.sink_infinite = to_sink.infinite;
        if (t.source_infinite) {
            t.offset = to_sink.value;
        } else if (t.sink_infinite) {
            t.offset = to_source.value;
        } else {
            t.offset = std::min(to_source.value, to_sink.value);
            t.to_source = to_source.value - t.offset;
            t.to_sink = to_sink.value - t.offset;
        }
        terminals_[static_cast<std::size_t>(u)] = t;
    }

    /// Sum of the normalization offsets over all nodes.
    [[nodiscard]] Cap terminal_offset() const noexcept
    {
        Cap total{};
        for (const auto& t : terminals_) total += t.offset;
        return total;
    }

    /// The finite value that stands in for kInfinite.
    [[nodiscard]] Cap infinite_capacity() const noexcept
    {
        Cap total{};
        for (const auto& a : arcs_) total += a.cap_forward + a.cap_backward;
        for (const auto& t : terminals_) total += t.to_source + t.to_sink + t.offset;
        return total + Cap{1};
    }

    /// Largest finite capacity, used to scale the floating-point zero test.
    [[nodiscard]] Cap max_finite_capacity() const noexcept
    {
        Cap m{};
        for (const auto& a : arcs_) m = std::max({m, a.cap_forward, a.cap_backward});
        for (const auto& t : terminals_) m = std::max({m, t.to_source, t.to_sink});
        return m;
    }

    /// Net source capacity minus net sink capacity, with kInfinite realized.
    [[nodiscard]] Cap net_terminal(int node, Cap infinite) const
    {
        const auto& t = terminals_[static_cast<std::size_t>(node)];
        if (t.source_infinite) return infinite;
        if (t.sink_infinite) return -infinite;
        return t.to_source - t.to_sink;
    }

private:
    void check_node(int u) const
    {
        if (u < 0 || u >= node_count()) {
            throw Error(ErrorCode::InvalidNode, "node id " + std::to_string(u) + " out of range");
        }
    }

    static void check_capacity(Cap c)
    {
        if constexpr (std::is_floating_point_v<Cap>) {
            if (!(c >= Cap{0}) || !std::isfinite(c)) {
                throw Error(ErrorCode::NegativeCapacity, "capacity must be finite and >= 0");
            }
        } else {
            if (c < Cap{0}) throw Error(ErrorCode::NegativeCapacity, "capacity must be >= 0");
        }
    }

    std::vector<Arc> arcs_;
    std::vector<Terminal> terminals_;
};

/// Capacity of the cut induced by `labels` in the network as constructed.
/// Infinite terminal arcs that cross the cut count with their realized value.
template <typename Cap>
[[nodiscard]] Cap cut_capacity(const FlowNetwork<Cap>& net, std::span<const Side> labels)
{
    if (labels.size() != static_cast<std::size_t>(net.node_count())) {
        throw Error(ErrorCode::DimensionMismatch, "labeling size differs from node count");
    }
    const Cap inf = net.infinite_capacity();
    Cap total{};
    for (const auto& a : net.arcs()) {
        const Side su = labels[static_cast<std::size_t>(a.from)];
        const Side sv = labels[static_cast<std::size_t>(a.to)];
        if (su == Side::Source && sv == Side::Sink) total += a.cap_forward;
        if (su == Side::Sink && sv == Side::Source) total += a.cap_backward;
    }
    for (int i = 0; i < net.node_count(); ++i) {
        const auto& t = net.terminal(i);
        total += t.offset;
        if (labels[static_cast<std::size_t>(i)] == Side::Source) {
            total += t.sink_infinite ? inf : t.to_sink;
        } else {
            total += t.source_infinite ? inf : t.to_source;
        }
    }
    return total;
}

namespace detail {

template <typename Cap>
class BoykovKolmogorov {
public:
    explicit BoykovKolmogorov(const FlowNetwork<Cap>& net)
        : n_(static_cast<std::size_t>(net.node_count()))
    {
        if constexpr (std::is_floating_point_v<Cap>) {
            // Residuals within this band of zero are rounding noise.
            eps_ = net.max_finite_capacity() * Cap(1e-13);
        }
        build(net);
    }

    Cap run()
    {
        init_trees();
        int current = -1;
        for (;;) {
            int i = -1;
            if (current >= 0) {
                queued_[current] = false;
                if (parent_[current] != kNone) i = current;
                current = -1;
            }
            if (i < 0) {
                i = next_active();
                if (i < 0) break;
            }

            const int middle = is_sink_[i] ? grow_sink(i) : grow_source(i);
            ++time_;
            if (middle >= 0) {
                // Keep expanding the same node after the augmentation.
                queued_[i] = true;
                current = i;
                augment(middle);
                adopt_orphans();
            }
        }
        return flow_;
    }

    [[nodiscard]] bool source_side(int i) const
    {
        return parent_[i] != kNone && !is_sink_[i];
    }

private:
    static constexpr int kNone = -1;
    static constexpr int kTerminal = -2;
    static constexpr int kOrphan = -3;
    static constexpr long kInfiniteDist = std::numeric_limits<long>::max();

    static int sister(int a) noexcept { return a ^ 1; }
    [[nodiscard]] bool positive(Cap c) const noexcept { return c > eps_; }

    void build(const FlowNetwork<Cap>& net)
    {
        const Cap inf = net.infinite_capacity();
        tr_cap_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) tr_cap_[i] = net.net_terminal(static_cast<int>(i), inf);

        std::vector<int> degree(n_ + 1, 0);
        for (const auto& a : net.arcs()) {
            if (a.cap_forward == Cap{0} && a.cap_backward == Cap{0}) continue;
            head_.push_back(a.to);
            rcap_.push_back(a.cap_forward);
            head_.push_back(a.from);
            rcap_.push_back(a.cap_backward);
            ++degree[static_cast<std::size_t>(a.from)];
            ++degree[static_cast<std::size_t>(a.to)];
        }
        first_.assign(n_ + 1, 0);
        for (std::size_t i = 0; i < n_; ++i) first_[i + 1] = first_[i] + degree[i];
        out_.resize(head_.size());
        std::vector<int> fill(first_.begin(), first_.end() - 1);
        for (std::size_t a = 0; a < head_.size(); ++a) {
            // arc a leaves the head of its sister
            const auto tail = static_cast<std::size_t>(head_[static_cast<std::size_t>(sister(static_cast<int>(a)))]);
            out_[static_cast<std::size_t>(fill[tail]++)] = static_cast<int>(a);
        }

        parent_.assign(n_, kNone);
        is_sink_.assign(n_, false);
        queued_.assign(n_, false);
        ts_.assign(n_, 0);
        dist_.assign(n_, 0);
    }

    void init_trees()
    {
        for (std::size_t i = 0; i < n_; ++i) {
            const int node = static_cast<int>(i);
            if (positive(tr_cap_[i])) {
                is_sink_[i] = false;
                parent_[i] = kTerminal;
                dist_[i] = 1;
                set_active(node);
            } else if (positive(-tr_cap_[i])) {
                is_sink_[i] = true;
                parent_[i] = kTerminal;
                dist_[i] = 1;
                set_active(node);
            } else {
                parent_[i] = kNone;
            }
        }
    }

    void set_active(int i)
    {
        if (!queued_[i]) {
            queued_[i] = true;
            active_.push_back(i);
        }
    }

    int next_active()
    {
        while (!active_.empty()) {
            const int i = active_.front();
            active_.pop_front();
            queued_[i] = false;
            if (parent_[i] != kNone) return i;
        }
        return -1;
    }

    // Returns the arc from the source tree into the sink tree, or -1.
    int grow_source(int i)
    {
        for (int p = first_[i]; p < first_[i + 1]; ++p) {
            const int a = out_[p];
            if (!positive(rcap_[a])) continue;
            const int j = head_[a];
            if (parent_[j] == kNone) {
                is_sink_[j] = false;
                parent_[j] = sister(a);
                ts_[j] = ts_[i];
                dist_[j] = dist_[i] + 1;
                set_active(j);
            } else if (is_sink_[j]) {
                return a;
            } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
                parent_[j] = sister(a);
                ts_[j] = ts_[i];
                dist_[j] = dist_[i] + 1;
            }
        }
        return -1;
    }

    int grow_sink(int i)
    {
        for (int p = first_[i]; p < first_[i + 1]; ++p) {
            const int a = out_[p];
            if (!positive(rcap_[sister(a)])) continue;
            const int j = head_[a];
            if (parent_[j] == kNone) {
                is_sink_[j] = true;
                parent_[j] = sister(a);
                ts_[j] = ts_[i];
                dist_[j] = dist_[i] + 1;
                set_active(j);
            } else if (!is_sink_[j]) {
                return sister(a);
            } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
                parent_[j] = sister(a);
                ts_[j] = ts_[i];
                dist_[j] = dist_[i] + 1;
            }
        }
        return -1;
    }

    void set_orphan_front(int i)
    {
        parent_[i] = kOrphan;
        orphans_.push_front(i);
    }

    void set_orphan_rear(int i)
    {
        parent_[i] = kOrphan;
        orphans_.push_back(i);
    }

    void augment(int middle)
    {
        Cap bottleneck = rcap_[middle];

        int i = head_[sister(middle)];
        for (int a = parent_[i]; a != kTerminal; a = parent_[i]) {
            bottleneck = std::min(bottleneck, rcap_[sister(a)]);
            i = head_[a];
        }
        bottleneck = std::min(bottleneck, tr_cap_[i]);

        i = head_[middle];
        for (int a = parent_[i]; a != kTerminal; a = parent_[i]) {
            bottleneck = std::min(bottleneck, rcap_[a]);
            i = head_[a];
        }
        bottleneck = std::min(bottleneck, -tr_cap_[i]);

        rcap_[sister(middle)] += bottleneck;
        rcap_[middle] -= bottleneck;

        i = head_[sister(middle)];
        for (int a = parent_[i]; a != kTerminal; a = parent_[i]) {
            rcap_[a] += bottleneck;
            rcap_[sister(a)] -= bottleneck;
            const int next = head_[a];
            if (!positive(rcap_[sister(a)])) set_orphan_front(i);
            i = next;
        }
        tr_cap_[i] -= bottleneck;
        if (!positive(tr_cap_[i])) set_orphan_front(i);

        i = head_[middle];
        for (int a = parent_[i]; a != kTerminal; a = parent_[i]) {
            rcap_[sister(a)] += bottleneck;
            rcap_[a] -= bottleneck;
            const int next = head_[a];
            if (!positive(rcap_[a])) set_orphan_front(i);
            i = next;
        }
        tr_cap_[i] += bottleneck;
        if (!positive(-tr_cap_[i])) set_orphan_front(i);

        flow_ += bottleneck;
    }

    void adopt_orphans()
    {
        while (!orphans_.empty()) {
            const int i = orphans_.front();
            orphans_.pop_front();
            process_orphan(i, is_sink_[i]);
        }
    }

    // Distance from j to its tree root, or kInfiniteDist when the chain runs
    // into an orphan. Visited chains are stamped with the current time.
    long origin_distance(int j)
    {
        long d = 0;
        for (;;) {
            if (ts_[j] == time_) {
                return d + dist_[j];
            }
            const int a = parent_[j];
            ++d;
            if (a == kTerminal) {
                ts_[j] = time_;
                dist_[j] = 1;
                return d;
            }
            if (a == kOrphan) return kInfiniteDist;
            j = head_[a];
        }
    }

    void process_orphan(int i, bool sink_tree)
    {
        int best_arc = -1;
        long best_dist = kInfiniteDist;

        for (int p = first_[i]; p < first_[i + 1]; ++p) {
            const int a0 = out_[p];
            const Cap residual = sink_tree ? rcap_[a0] : rcap_[sister(a0)];
            if (!positive(residual)) continue;
            const int j = head_[a0];
            if (is_sink_[j] != sink_tree || parent_[j] == kNone) continue;

            long d = origin_distance(j);
            if (d == kInfiniteDist) continue;
            if (d < best_dist) {
                best_arc = a0;
                best_dist = d;
            }
            for (int k = j; ts_[k] != time_; k = head_[parent_[k]]) {
                ts_[k] = time_;
                dist_[k] = d--;
            }
        }

        if (best_arc >= 0) {
            parent_[i] = best_arc;
            ts_[i] = time_;
            dist_[i] = best_dist + 1;
            return;
        }

        parent_[i] = kNone;
        for (int p = first_[i]; p < first_[i + 1]; ++p) {
            const int a0 = out_[p];
            const int j = head_[a0];
            if (is_sink_[j] != sink_tree || parent_[j] == kNone) continue;
            const Cap residual = sink_tree ? rcap_[a0] : rcap_[sister(a0)];
            if (positive(residual)) set_active(j);
            const int a = parent_[j];
            if (a != kTerminal && a != kOrphan && head_[a] == i) set_orphan_rear(j);
        }
    }

    std::size_t n_;
    Cap eps_{};
    Cap flow_{};
    long time_ = 0;

    std::vector<int> head_;
    std::vector<Cap> rcap_;
    std::vector<int> first_;
    std::vector<int> out_;

    std::vector<Cap> tr_cap_;
    std::vector<int> parent_;
    std::vector<bool> is_sink_;
    std::vector<bool> queued_;
    std::vector<long> ts_;
    std::vector<long> dist_;

    std::deque<int> active_;
    std::deque<int> orphans_;
};

} // namespace detail

/// Maximum flow and a minimum cut of `net`.
///
/// A node is labeled Source iff it is reachable from the source in the final
/// residual graph; everything else, including nodes reachable from neither
/// terminal, is labeled Sink. Among equal-cost cuts this picks the one with
/// the smallest source side. Identical input gives identical output.
template <typename Cap>
[[nodiscard]] CutLabeling<Cap> solve(const FlowNetwork<Cap>& net)
{
    detail::BoykovKolmogorov<Cap> solver(net);
    const Cap pushed = solver.run();

    CutLabeling<Cap> out;
    out.terminal_offset = net.terminal_offset();
    out.flow_value = pushed + out.terminal_offset;
    out.labels.resize(static_cast<std::size_t>(net.node_count()));
    for (int i = 0; i < net.node_count(); ++i) {
        out.labels[static_cast<std::size_t>(i)] = solver.source_side(i) ? Side::Source : Side::Sink;
    }
    return out;
}

template <typename Cap>
struct BruteForceCut {
    Cap value{};
    std::vector<Side> labels;
};

/// Exact minimum cut by enumerating every labeling. Test oracle only.
/// Infinite terminal arcs are treated as truly infinite: labelings that cut
/// one are skipped rather than priced.
template <typename Cap>
[[nodiscard]] BruteForceCut<Cap> brute_force_min_cut(const FlowNetwork<Cap>& net, int max_nodes = 20)
{
    const int n = net.node_count();
    if (n > max_nodes) {
        throw Error(ErrorCode::TooLarge, std::to_string(n) + " nodes exceeds the enumeration limit");
    }

    BruteForceCut<Cap> best;
    bool found = false;
    std::vector<Side> labels(static_cast<std::size_t>(n));
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        bool feasible = true;
        Cap value{};
        for (int i = 0; i < n && feasible; ++i) {
            const bool source = ((mask >> i) & 1U) != 0;
            labels[static_cast<std::size_t>(i)] = source ? Side::Source : Side::Sink;
            const auto& t = net.terminal(i);
            if (source && t.sink_infinite) feasible = false;
            if (!source && t.source_infinite) feasible = false;
            value += t.offset + (source ? t.to_sink : t.to_source);
        }
        if (!feasible) continue;
        for (const auto& a : net.arcs()) {
            const bool su = ((mask >> a.from) & 1U) != 0;
            const bool sv = ((mask >> a.to) & 1U) != 0;
            if (su && !sv) value += a.cap_forward;
            if (!su && sv) value += a.cap_backward;
        }
        if (!found || value < best.value) {
            found = true;
            best.value = value;
            best.labels = labels;
        }
    }
    return best;
}

} // namespace vesselcut
