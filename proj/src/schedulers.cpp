#include "fairsched/schedulers.hpp"

#include <algorithm>
#include <string>

#include "fairsched/errors.hpp"

namespace fairsched {

CompletionSequence completion_sequence_of(const Workload& workload, Scheduler& reference) {
    SimulationResult res = run(workload, reference);
    return res.completion_sequence;
}

// ---- PS --------------------------------------------------------------------

void PsScheduler::notify_arrival(const JobSpec& job, double) {
    pending_.insert(job.id);
}

void PsScheduler::notify_real_completion(JobId id, double) {
    pending_.erase(id);
}

void PsScheduler::allocation(double, AllocationVector& out) {
    out.clear();
    if (pending_.empty()) return;
    const double share = 1.0 / static_cast<double>(pending_.size());
    for (JobId id : pending_) out.add(id, share);
}

// ---- DPS -------------------------------------------------------------------

void DpsScheduler::notify_arrival(const JobSpec& job, double) {
    pending_.emplace(job.id, job.weight);
}

void DpsScheduler::notify_real_completion(JobId id, double) {
    pending_.erase(id);
}

void DpsScheduler::allocation(double, AllocationVector& out) {
    out.clear();
    if (pending_.empty()) return;
    double total = 0.0;
    for (const auto& [id, w] : pending_) total += w;
    for (const auto& [id, w] : pending_) out.add(id, w / total);
}

// ---- FIFO ------------------------------------------------------------------

void FifoScheduler::notify_arrival(const JobSpec& job, double) {
    // Arrivals are delivered in (release, id) order, so the deque stays
    // sorted by that key.
    queue_.push_back(job.id);
}

void FifoScheduler::notify_real_completion(JobId id, double t) {
    if (queue_.empty() || queue_.front() != id)
        throw PolicyViolation("fifo completed a job that was not at the head", t);
    queue_.pop_front();
}

void FifoScheduler::allocation(double, AllocationVector& out) {
    out.clear();
    if (!queue_.empty()) out.add(queue_.front(), 1.0);
}

// ---- SRPT / SRPTE ----------------------------------------------------------

void SrptScheduler::settle(double t) {
    if (running_) jobs_[*running_].attained += t - last_t_;
    last_t_ = t;
}

void SrptScheduler::notify_arrival(const JobSpec& job, double t) {
    settle(t);
    const double base = use_estimates_ ? job.estimate : job.size;
    jobs_[job.id] = Info{base, 0.0, job.release};
    const Key arrived{base, job.release, job.id};
    if (!running_) {
        running_ = job.id;
        return;
    }
    const Info& run = jobs_[*running_];
    const Key current{run.base - run.attained, run.release, *running_};
    if (arrived < current) {
        waiting_.insert(current);
        running_ = job.id;
    } else {
        waiting_.insert(arrived);
    }
}

void SrptScheduler::notify_real_completion(JobId id, double t) {
    settle(t);
    if (running_ && *running_ == id) {
        running_.reset();
        if (!waiting_.empty()) {
            running_ = waiting_.begin()->id;
            waiting_.erase(waiting_.begin());
        }
    } else {
        // Possible only for a zero-work arrival that completed unserved.
        const Info& info = jobs_.at(id);
        waiting_.erase(Key{info.base - info.attained, info.release, id});
    }
    jobs_.erase(id);
}

void SrptScheduler::allocation(double t, AllocationVector& out) {
    out.clear();
    settle(t);
    if (running_) out.add(*running_, 1.0);
}

// ---- Pri -------------------------------------------------------------------

PriScheduler::PriScheduler(CompletionSequence sequence, std::string label)
    : label_(std::move(label)), by_rank_(std::move(sequence)) {
    for (std::size_t r = 0; r < by_rank_.size(); ++r) {
        if (!rank_.emplace(by_rank_[r], r).second)
            throw ParamError("completion sequence repeats job " + std::to_string(by_rank_[r]));
    }
}

void PriScheduler::notify_arrival(const JobSpec& job, double) {
    auto it = rank_.find(job.id);
    if (it == rank_.end())
        throw ContractViolation("job " + std::to_string(job.id) + " missing from the completion sequence");
    pending_ranks_.insert(it->second);
}

void PriScheduler::notify_real_completion(JobId id, double) {
    pending_ranks_.erase(rank_.at(id));
}

void PriScheduler::allocation(double, AllocationVector& out) {
    out.clear();
    if (!pending_ranks_.empty()) out.add(by_rank_[*pending_ranks_.begin()], 1.0);
}

// ---- FSP -------------------------------------------------------------------

void FspScheduler::notify_arrival(const JobSpec& job, double t) {
    clock_.advance_to(t);
    const double tag = clock_.on_arrival(t, job.id, job.estimate, 1.0);
    heap_.push(Entry{tag, job.release, job.id});
}

void FspScheduler::notify_real_completion(JobId id, double) {
    // The virtual simulation is untouched: the job lingers there until its
    // tag passes, so later tags stay those of PS on the estimates.
    completed_.insert(id);
}

void FspScheduler::allocation(double, AllocationVector& out) {
    out.clear();
    while (!heap_.empty() && completed_.count(heap_.top().id) != 0) heap_.pop();
    if (!heap_.empty()) out.add(heap_.top().id, 1.0);
}

// ---- PSBS ------------------------------------------------------------------

void PsbsScheduler::advance(double t) {
    for (const VirtualCompletion& vc : clock_.advance_to(t)) {
        if (completed_.count(vc.id) != 0) continue; // lingering, already done
        late_.emplace(vc.id, weights_.at(vc.id));
        late_seen_ = true;
    }
}

void PsbsScheduler::notify_arrival(const JobSpec& job, double t) {
    advance(t);
    weights_.emplace(job.id, job.weight);
    const double tag = clock_.on_arrival(t, job.id, job.estimate, job.weight);
    heap_.push(Entry{tag, job.release, job.id});
}

void PsbsScheduler::notify_real_completion(JobId id, double t) {
    // Record the completion before advancing: when the real and virtual
    // completions coincide (always the case for busy-period-final jobs with
    // exact sizes) the job must linger, not flicker through the late set.
    completed_.insert(id);
    advance(t);
    late_.erase(id);
}

void PsbsScheduler::allocation(double t, AllocationVector& out) {
    out.clear();
    advance(t);
    if (!late_.empty()) {
        double total = 0.0;
        for (const auto& [id, w] : late_) total += w;
        for (const auto& [id, w] : late_) out.add(id, w / total);
        return;
    }
    while (!heap_.empty() && completed_.count(heap_.top().id) != 0) heap_.pop();
    if (!heap_.empty()) out.add(heap_.top().id, 1.0);
}

std::optional<double> PsbsScheduler::next_internal_event(double t) {
    advance(t);
    // A pending job turning late changes the allocation, and that happens
    // exactly at a virtual completion.
    if (auto vc = clock_.next_virtual_completion(t)) return vc->time;
    return std::nullopt;
}

// ---- factory ---------------------------------------------------------------

const std::vector<std::string>& scheduler_names() {
    static const std::vector<std::string> names{"ps",   "dps", "fifo", "srpt",
                                                "srpte", "fsp", "psbs"};
    return names;
}

std::unique_ptr<Scheduler> make_scheduler(std::string_view name, const Workload& workload) {
    if (name == "ps") return std::make_unique<PsScheduler>();
    if (name == "dps") return std::make_unique<DpsScheduler>();
    if (name == "fifo") return std::make_unique<FifoScheduler>();
    if (name == "srpt") return std::make_unique<SrptScheduler>(false);
    if (name == "srpte") return std::make_unique<SrptScheduler>(true);
    if (name == "fsp") return std::make_unique<FspScheduler>();
    if (name == "psbs") return std::make_unique<PsbsScheduler>();
    if (name.substr(0, 4) == "pri:") {
        auto reference = make_scheduler(name.substr(4), workload);
        CompletionSequence seq = completion_sequence_of(workload, *reference);
        return std::make_unique<PriScheduler>(std::move(seq), std::string(name));
    }
    std::string msg = "unknown policy '" + std::string(name) + "'; registered:";
    for (const std::string& n : scheduler_names()) msg += " " + n;
    msg += " pri:<name>";
    throw ParamError(msg);
}

} // namespace fairsched
