// Python bindings for the core operations: workload generation and trace IO,
// policy runs (event engine and fluid oracle), metrics and parameter sweeps.
// Thin by design; anything expressible as a composition of these stays in
// python.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fairsched/engine.hpp"
#include "fairsched/errors.hpp"
#include "fairsched/metrics.hpp"
#include "fairsched/oracle.hpp"
#include "fairsched/schedulers.hpp"
#include "fairsched/sweep.hpp"
#include "fairsched/workload.hpp"

namespace py = pybind11;
using namespace fairsched;

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

WorkloadParams make_params(std::size_t n_jobs, double shape, double mean_size, double load,
                           double sigma, std::uint64_t seed, const WeightModel& weights) {
    WorkloadParams p;
    p.n_jobs = n_jobs;
    p.shape = shape;
    p.mean_size = mean_size;
    p.load = load;
    p.sigma = sigma;
    p.seed = seed;
    p.weights = weights;
    return p;
}

} // namespace

PYBIND11_MODULE(_fairsched, m) {
    m.doc() = "Preemptive single-machine scheduling simulator: policies, "
              "virtual-clock fair schedulers, metrics and sweeps.";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParamError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ParseError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const MetricError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const IoError& e) {
            PyErr_SetString(PyExc_OSError, e.what());
        } catch (const Error& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    py::class_<JobSpec>(m, "Job")
        .def(py::init([](JobId id, double release, double size, py::object estimate,
                         double weight) {
                 JobSpec j;
                 j.id = id;
                 j.release = release;
                 j.size = size;
                 j.estimate = estimate.is_none() ? size : estimate.cast<double>();
                 j.weight = weight;
                 return j;
             }),
             py::arg("id"), py::arg("release"), py::arg("size"), py::arg("estimate") = py::none(),
             py::arg("weight") = 1.0)
        .def_readwrite("id", &JobSpec::id)
        .def_readwrite("release", &JobSpec::release)
        .def_readwrite("size", &JobSpec::size)
        .def_readwrite("estimate", &JobSpec::estimate)
        .def_readwrite("weight", &JobSpec::weight)
        .def(py::self == py::self)
        .def("__repr__", [](const JobSpec& j) {
            return "Job(id=" + std::to_string(j.id) + ", release=" + fmt_double(j.release) +
                   ", size=" + fmt_double(j.size) + ", estimate=" + fmt_double(j.estimate) +
                   ", weight=" + fmt_double(j.weight) + ")";
        });

    py::class_<Workload>(m, "Workload")
        .def(py::init<std::vector<JobSpec>>(), py::arg("jobs"))
        .def_property_readonly("jobs", &Workload::jobs)
        .def("__len__", &Workload::size)
        .def(py::self == py::self)
        .def("__repr__", [](const Workload& w) {
            return "Workload(" + std::to_string(w.size()) + " jobs)";
        });

    py::class_<WeightModel>(m, "WeightModel")
        .def_static("uniform", &WeightModel::uniform)
        .def_static("discrete", &WeightModel::discrete, py::arg("values"), py::arg("probs"))
        .def_property_readonly("is_uniform", &WeightModel::is_uniform)
        .def_readonly("values", &WeightModel::values)
        .def_readonly("probs", &WeightModel::probs);

    m.def(
        "generate",
        [](std::size_t n_jobs, double shape, double mean_size, double load, double sigma,
           std::uint64_t seed, const WeightModel& weights) {
            return generate(make_params(n_jobs, shape, mean_size, load, sigma, seed, weights));
        },
        py::arg("n_jobs"), py::arg("shape") = 1.0, py::arg("mean_size") = 1.0,
        py::arg("load") = 0.9, py::arg("sigma") = 0.0, py::arg("seed") = 0,
        py::arg("weights") = WeightModel::uniform(),
        "Weibull sizes, Poisson arrivals, log-normal size estimates; deterministic in seed.");

    m.def("read_trace", py::overload_cast<const std::string&>(&read_trace), py::arg("path"));
    m.def("write_trace", py::overload_cast<const Workload&, const std::string&>(&write_trace),
          py::arg("workload"), py::arg("path"));

    py::class_<CompletionRecord>(m, "CompletionRecord")
        .def_readonly("job_id", &CompletionRecord::job_id)
        .def_readonly("completion", &CompletionRecord::completion)
        .def_readonly("sojourn", &CompletionRecord::sojourn)
        .def_readonly("served", &CompletionRecord::served)
        .def("__repr__", [](const CompletionRecord& r) {
            return "CompletionRecord(job_id=" + std::to_string(r.job_id) +
                   ", completion=" + fmt_double(r.completion) + ")";
        });

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_readonly("records", &SimulationResult::records)
        .def_readonly("completion_sequence", &SimulationResult::completion_sequence)
        .def_readonly("event_count", &SimulationResult::event_count)
        .def_readonly("wall_time", &SimulationResult::wall_time)
        .def_readonly("max_alloc_sum_deviation", &SimulationResult::max_alloc_sum_deviation)
        .def("record_of", &SimulationResult::record_of, py::arg("job_id"),
             py::return_value_policy::reference_internal)
        .def("__repr__", [](const SimulationResult& r) {
            return "SimulationResult(" + std::to_string(r.records.size()) + " completions)";
        });

    m.def(
        "run",
        [](const Workload& w, const std::string& policy) {
            auto s = make_scheduler(policy, w);
            return run(w, *s);
        },
        py::arg("workload"), py::arg("policy"),
        "Event-driven run of a named policy ('ps', 'dps', 'fifo', 'srpt', 'srpte', 'fsp', "
        "'psbs', or 'pri:<policy>' for the prioritized variant).");

    m.def(
        "step_simulate",
        [](const Workload& w, const std::string& policy, double dt) {
            return step_simulate(w, policy, OracleConfig{.dt = dt, .max_time = 1e7});
        },
        py::arg("workload"), py::arg("policy"), py::arg("dt") = 1e-4,
        "Fixed-step fluid cross-check of the same policy; first-order in dt.");

    m.def("policies", [] { return scheduler_names(); },
          "Base policy names accepted by run().");

    m.def("mean_sojourn", &mean_sojourn, py::arg("result"));
    m.def("normalized_mst", &normalized_mst, py::arg("result"), py::arg("baseline"));
    m.def("makespan", &makespan, py::arg("result"));
    m.def("pearson_correlation", &pearson_correlation, py::arg("xs"), py::arg("ys"));
    m.def("pearson_correlation_log", &pearson_correlation_log, py::arg("xs"), py::arg("ys"));

    py::class_<DominanceViolation>(m, "DominanceViolation")
        .def_readonly("job_id", &DominanceViolation::job_id)
        .def_readonly("candidate_completion", &DominanceViolation::candidate_completion)
        .def_readonly("reference_completion", &DominanceViolation::reference_completion)
        .def("__repr__", [](const DominanceViolation& v) {
            return "DominanceViolation(job_id=" + std::to_string(v.job_id) +
                   ", candidate=" + fmt_double(v.candidate_completion) +
                   ", reference=" + fmt_double(v.reference_completion) + ")";
        });
    m.def("dominance_violations", &dominance_violations, py::arg("candidate"),
          py::arg("reference"), py::arg("tol") = 1e-9,
          "Jobs the candidate finishes later than the reference by more than tol.");

    py::class_<SweepGrid>(m, "SweepGrid")
        .def(py::init<>())
        .def_readwrite("shapes", &SweepGrid::shapes)
        .def_readwrite("sigmas", &SweepGrid::sigmas)
        .def_readwrite("seeds", &SweepGrid::seeds)
        .def_readwrite("n_jobs", &SweepGrid::n_jobs)
        .def_readwrite("load", &SweepGrid::load)
        .def_readwrite("mean_size", &SweepGrid::mean_size)
        .def_readwrite("weights", &SweepGrid::weights)
        .def_readwrite("policies", &SweepGrid::policies)
        .def_readwrite("master_seed", &SweepGrid::master_seed);

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("shape", &SweepRow::shape)
        .def_readonly("sigma", &SweepRow::sigma)
        .def_readonly("seed", &SweepRow::seed)
        .def_readonly("policy", &SweepRow::policy)
        .def_readonly("mst", &SweepRow::mst)
        .def_readonly("mst_norm_ps", &SweepRow::mst_norm_ps)
        .def("__repr__", [](const SweepRow& r) {
            return "SweepRow(shape=" + fmt_double(r.shape) + ", sigma=" + fmt_double(r.sigma) +
                   ", policy='" + r.policy + "', mst_norm_ps=" + fmt_double(r.mst_norm_ps) + ")";
        });

    m.def("run_sweep", &run_sweep, py::arg("grid"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>(),
          "Runs every (shape, sigma, seed, policy) cell, normalized against PS per cell.");
}
