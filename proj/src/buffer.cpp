#include "dmcis/buffer.hpp"

#include "dmcis/errors.hpp"

#include <algorithm>

namespace dmcis {

bool ReportBuffer::push(Report r)
{
    if (capacity_ != kUnbounded && r.size_bytes > capacity_ - used_ - reserved_)
        return false;
    used_ += r.size_bytes;
    items_.push_back(std::move(r));
    return true;
}

bool ReportBuffer::reserve(std::uint64_t bytes)
{
    if (capacity_ != kUnbounded && bytes > free_capacity())
        return false;
    reserved_ += bytes;
    return true;
}

void ReportBuffer::release(std::uint64_t bytes)
{
    if (bytes > reserved_)
        throw Error("releasing more bytes than reserved");
    reserved_ -= bytes;
}

const Report* ReportBuffer::next_unclaimed(const std::function<bool(const Report&)>& eligible) const
{
    for (const auto& r : items_) {
        if (claimed_.contains(r.id))
            continue;
        if (eligible && !eligible(r))
            continue;
        return &r;
    }
    return nullptr;
}

std::optional<Report> ReportBuffer::take(ReportId id)
{
    auto it = std::find_if(items_.begin(), items_.end(), [id](const Report& r) { return r.id == id; });
    if (it == items_.end())
        return std::nullopt;
    Report r = std::move(*it);
    items_.erase(it);
    claimed_.erase(id);
    used_ -= r.size_bytes;
    return r;
}

Report* ReportBuffer::find(ReportId id)
{
    for (auto& r : items_)
        if (r.id == id)
            return &r;
    return nullptr;
}

std::uint64_t ReportBuffer::pending_bytes(const std::function<bool(const Report&)>& eligible) const
{
    std::uint64_t total = 0;
    for (const auto& r : items_)
        if (!eligible || eligible(r))
            total += r.size_bytes;
    return total;
}

} // namespace dmcis
