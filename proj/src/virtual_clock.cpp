#include "fairsched/virtual_clock.hpp"

#include <cmath>

#include "fairsched/errors.hpp"

namespace fairsched {

namespace {
constexpr double kTimeEps = 1e-9;
} // namespace

VirtualClock::VirtualClock()
    : comparisons_(std::make_shared<std::uint64_t>(0)),
      queue_(CountingGreater{comparisons_}) {}

void VirtualClock::pop_completion(double real_time, std::vector<VirtualCompletion>& out) {
    const Entry& top = queue_.top();
    v_now_ = top.tag; // v reaches the tag exactly
    active_weight_ -= jobs_.at(top.id).weight;
    if (active_weight_ < 0.0) active_weight_ = 0.0; // float dust
    out.push_back({top.id, real_time});
    queue_.pop();
    last_real_time_ = real_time;
}

std::vector<VirtualCompletion> VirtualClock::advance_to(double t) {
    if (t < last_real_time_ - kTimeEps)
        throw ContractViolation("VirtualClock::advance_to: time moved backwards");
    if (t < last_real_time_) t = last_real_time_;

    std::vector<VirtualCompletion> completed;
    while (!queue_.empty()) {
        double gap = queue_.top().tag - v_now_;
        if (gap < 0.0) gap = 0.0;
        double reach = last_real_time_ + gap * active_weight_;
        if (reach > t) break;
        pop_completion(reach, completed);
    }
    if (queue_.empty()) {
        // No virtually-pending jobs: v freezes, real time still advances.
        last_real_time_ = t;
    } else if (t > last_real_time_) {
        v_now_ += (t - last_real_time_) / active_weight_;
        last_real_time_ = t;
    }
    return completed;
}

double VirtualClock::on_arrival(double t, JobId id, double estimate, double weight) {
    if (t < last_real_time_ - kTimeEps || t > last_real_time_ + kTimeEps)
        throw ContractViolation("VirtualClock::on_arrival: advance_to(t) first");
    if (jobs_.count(id)) throw ContractViolation("VirtualClock::on_arrival: duplicate job id");
    if (!(estimate > 0.0) || !(weight > 0.0))
        throw ContractViolation("VirtualClock::on_arrival: estimate and weight must be > 0");

    double tag = v_now_ + estimate / weight;
    // Snap onto an earlier tag when the difference is rounding noise; the
    // window is far above accumulated ulps and far below real separations.
    const double raw = tag;
    auto above = tag_pool_.lower_bound(raw);
    double gap = 1e-11 * std::max(1.0, std::abs(raw));
    if (above != tag_pool_.end() && *above - raw <= gap) {
        gap = *above - raw;
        tag = *above;
    }
    if (above != tag_pool_.begin() && raw - *std::prev(above) <= gap)
        tag = *std::prev(above);
    tag_pool_.insert(tag);
    jobs_.emplace(id, JobInfo{tag, t, weight});
    queue_.push({tag, t, id});
    active_weight_ += weight;
    return tag;
}

std::optional<VirtualCompletion> VirtualClock::next_virtual_completion(double now) const {
    if (queue_.empty()) return std::nullopt;
    const Entry& top = queue_.top();
    double gap = top.tag - v_now_;
    if (gap < 0.0) gap = 0.0;
    return VirtualCompletion{top.id, now + gap * active_weight_};
}

JobId VirtualClock::peek_order(std::span<const JobId> ids) const {
    if (ids.empty()) throw ContractViolation("VirtualClock::peek_order: empty id set");
    const JobInfo* best = nullptr;
    JobId best_id = 0;
    for (JobId id : ids) {
        auto it = jobs_.find(id);
        if (it == jobs_.end())
            throw ContractViolation("VirtualClock::peek_order: unknown job id");
        const JobInfo& info = it->second;
        bool better = best == nullptr;
        if (!better) {
            if (info.tag != best->tag)
                better = info.tag < best->tag;
            else if (info.release != best->release)
                better = info.release < best->release;
            else
                better = id < best_id;
        }
        if (better) {
            best = &info;
            best_id = id;
        }
    }
    return best_id;
}

double VirtualClock::finish_tag(JobId id) const {
    auto it = jobs_.find(id);
    if (it == jobs_.end()) throw ContractViolation("VirtualClock::finish_tag: unknown job id");
    return it->second.tag;
}

} // namespace fairsched
