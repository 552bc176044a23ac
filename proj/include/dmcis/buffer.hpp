#pragma once

#include "dmcis/report.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <set>

namespace dmcis {

// FIFO store of whole reports with a byte capacity. Reports being sent out
// stay resident and are marked claimed; bytes promised to an incoming
// transfer are reserved until it completes or aborts.
class ReportBuffer {
public:
    static constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

    explicit ReportBuffer(std::uint64_t capacity = kUnbounded) : capacity_(capacity) {}

    std::uint64_t capacity() const { return capacity_; }
    std::uint64_t used() const { return used_; }
    std::uint64_t reserved() const { return reserved_; }
    std::uint64_t free_capacity() const
    {
        if (capacity_ == kUnbounded)
            return kUnbounded;
        return capacity_ - used_ - reserved_;
    }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const std::deque<Report>& items() const { return items_; }

    // Appends unconditionally when capacity allows; returns false otherwise.
    bool push(Report r);
    bool reserve(std::uint64_t bytes);
    void release(std::uint64_t bytes);

    // First unclaimed report accepted by `eligible`, in FIFO order.
    const Report* next_unclaimed(const std::function<bool(const Report&)>& eligible = {}) const;
    void claim(ReportId id) { claimed_.insert(id); }
    void unclaim(ReportId id) { claimed_.erase(id); }
    bool is_claimed(ReportId id) const { return claimed_.contains(id); }

    std::optional<Report> take(ReportId id);
    Report* find(ReportId id);

    std::uint64_t pending_bytes(const std::function<bool(const Report&)>& eligible = {}) const;

private:
    std::deque<Report> items_;
    std::set<ReportId> claimed_;
    std::uint64_t capacity_;
    std::uint64_t used_ = 0;
    std::uint64_t reserved_ = 0;
};

} // namespace dmcis
