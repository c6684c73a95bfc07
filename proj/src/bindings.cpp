#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ctlab/experiments.hpp"
#include "ctlab/extremes.hpp"
#include "ctlab/feedmi.hpp"
#include "ctlab/gaussmi.hpp"
#include "ctlab/simulate.hpp"
#include "ctlab/spectra.hpp"

namespace py = pybind11;
using namespace ctlab;

PYBIND11_MODULE(_ctlab, m) {
  m.doc() = "continuous-time AWGN channel sampling laboratory";

  py::class_<SampleGrid>(m, "SampleGrid")
      .def(py::init<double, int>(), py::arg("T"), py::arg("n"))
      .def_readonly("T", &SampleGrid::T)
      .def_readonly("n", &SampleGrid::n)
      .def_property_readonly("dt", &SampleGrid::dt)
      .def("time", &SampleGrid::time);

  py::class_<PathRecord>(m, "PathRecord")
      .def_readonly("grid", &PathRecord::grid)
      .def_readonly("values", &PathRecord::values)
      .def("at", &PathRecord::at)
      .def("sup_abs", &PathRecord::sup_abs);

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream"))
      .def("uniform", &RngStream::uniform)
      .def("normal", &RngStream::normal);

  py::class_<PsdSpec>(m, "PsdSpec")
      .def_static("band_limited_flat", &PsdSpec::band_limited_flat, py::arg("P"), py::arg("W"))
      .def_static("tabulated", &PsdSpec::tabulated, py::arg("lam"), py::arg("f"))
      .def_static("from_file", &PsdSpec::from_file)
      .def("density", &PsdSpec::density);

  py::class_<SpectralMoments>(m, "SpectralMoments")
      .def_readonly("m0", &SpectralMoments::m0)
      .def_readonly("m1", &SpectralMoments::m1);

  m.def("autocovariance", &autocovariance, py::arg("psd"), py::arg("v"));
  m.def("spectral_moment", &spectral_moment);
  m.def("block_covariance", &block_covariance);
  m.def("block_covariance_lags", &block_covariance_lags);
  m.def("gp_sample", &gp_sample);

  py::class_<DriftSpec>(m, "DriftSpec")
      .def_static("message_scaled", &DriftSpec::message_scaled, py::arg("theta"),
                  py::arg("pulse"), py::arg("messages"), py::arg("prior"))
      .def_static("linear_feedback", &DriftSpec::linear_feedback, py::arg("theta"),
                  py::arg("kappa"), py::arg("messages"), py::arg("prior"))
      .def_readonly("lipschitz", &DriftSpec::lipschitz)
      .def_readonly("growth", &DriftSpec::growth)
      .def_readonly("messages", &DriftSpec::messages)
      .def_readonly("prior", &DriftSpec::prior);

  m.def("brownian", &brownian);
  m.def("transmit_nonfeedback", &transmit_nonfeedback);
  m.def("transmit_feedback",
        [](const DriftSpec& d, double msg, const SampleGrid& g, RngStream& rng) {
          auto out = transmit_feedback(d, msg, g, rng);
          return py::make_tuple(out.y, out.b);
        });
  m.def("integrate_and_dump", &integrate_and_dump);
  m.def("normalize_increments", &normalize_increments);

  py::class_<MIEstimate>(m, "MIEstimate")
      .def_readonly("value", &MIEstimate::value)
      .def_readonly("trials", &MIEstimate::trials)
      .def_readonly("std_error", &MIEstimate::std_error);

  m.def("mi_logdet", &mi_logdet, py::arg("sigma"), py::arg("snr"));
  m.def("mi_logdet_toeplitz", &mi_logdet_toeplitz, py::arg("lags"), py::arg("snr"));
  m.def("toeplitz_logdet", &toeplitz_logdet);
  m.def("mmse_trace", &mmse_trace);
  m.def("mi_via_immse", &mi_via_immse);
  m.def("mi_sampled", &mi_sampled, py::arg("psd"), py::arg("T"), py::arg("n"),
        py::arg("levinson_threshold") = 1024);

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("mi", &OracleResult::mi)
      .def_readonly("uncertainty", &OracleResult::uncertainty)
      .def_readonly("dyadic_n", &OracleResult::dyadic_n)
      .def_readonly("dyadic_value", &OracleResult::dyadic_value)
      .def_readonly("converged", &OracleResult::converged);
  m.def("mi_continuous_oracle", &mi_continuous_oracle);

  m.def("thm1a_bound", &thm1a_bound);
  m.def("thm1b_bound", &thm1b_bound);
  m.def("cor1_bound", &cor1_bound);

  m.def("rho1", &rho1);
  m.def("rho2", &rho2);
  m.def("posterior_drift", &posterior_drift);

  py::class_<MeanSE>(m, "MeanSE")
      .def_readonly("mean", &MeanSE::mean)
      .def_readonly("std_error", &MeanSE::std_error);
  m.def("novikov_check", &novikov_check, py::arg("drift"), py::arg("fine_grid"),
        py::arg("trials"), py::arg("seed"), py::arg("workers") = 1);
  m.def("sup_norm_moment_check", &sup_norm_moment_check, py::arg("drift"),
        py::arg("fine_grid"), py::arg("eps"), py::arg("trials"), py::arg("seed"),
        py::arg("workers") = 1);

  py::class_<FeedbackMIResult>(m, "FeedbackMIResult")
      .def_readonly("continuous", &FeedbackMIResult::continuous)
      .def_readonly("n_list", &FeedbackMIResult::n_list)
      .def_readonly("sampled", &FeedbackMIResult::sampled)
      .def_readonly("gap", &FeedbackMIResult::gap)
      .def_readonly("gap_std_error", &FeedbackMIResult::gap_std_error)
      .def_readonly("clip_count", &FeedbackMIResult::clip_count);
  m.def("feedback_mi_crn", &feedback_mi_crn, py::arg("drift"), py::arg("fine_grid"),
        py::arg("n_list"), py::arg("trials"), py::arg("seed"), py::arg("workers") = 1);
  m.def("mi_feedback_sampled", &mi_feedback_sampled, py::arg("drift"), py::arg("coarse"),
        py::arg("fine_N"), py::arg("trials"), py::arg("seed"), py::arg("workers") = 1);
  m.def("mi_feedback_continuous", &mi_feedback_continuous, py::arg("drift"),
        py::arg("fine_grid"), py::arg("trials"), py::arg("seed"), py::arg("workers") = 1);

  py::enum_<MaxMoment>(m, "MaxMoment")
      .value("Square", MaxMoment::Square)
      .value("Fourth", MaxMoment::Fourth)
      .value("ExpSquare", MaxMoment::ExpSquare);
  py::class_<MaxGaussQuery>(m, "MaxGaussQuery")
      .def(py::init([](int n, MaxMoment moment, long trials) {
             return MaxGaussQuery{n, moment, trials};
           }),
           py::arg("n"), py::arg("moment"), py::arg("trials") = 0)
      .def_readonly("n", &MaxGaussQuery::n);
  m.def("zmax_exact", &zmax_exact);
  m.def("zmax_mc", &zmax_mc, py::arg("query"), py::arg("seed"), py::arg("workers") = 1);
  m.def("zmax_tail_bounds", [](int n, double t) {
    const auto b = zmax_tail_bounds(n, t);
    return py::make_tuple(b.lower_tail, b.upper_tail);
  });
  py::class_<RateFit>(m, "RateFit")
      .def_readonly("slope", &RateFit::slope)
      .def_readonly("intercept", &RateFit::intercept)
      .def_readonly("r_squared", &RateFit::r_squared);
  m.def("rate_fit", &rate_fit);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("pass_", &CheckResult::pass)
      .def_readonly("detail", &CheckResult::detail);
  py::class_<RunReport>(m, "RunReport")
      .def_readonly("experiment", &RunReport::experiment)
      .def_readonly("checks", &RunReport::checks)
      .def_readonly("csv_lines", &RunReport::csv_lines)
      .def_readonly("json_summary", &RunReport::json_summary)
      .def("passed", &RunReport::pass);
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("from_file", &ExperimentConfig::from_file)
      .def("set", &ExperimentConfig::set)
      .def_readwrite("experiment", &ExperimentConfig::experiment)
      .def_readwrite("out_dir", &ExperimentConfig::out_dir);
  m.def("run_experiment", &run_experiment);
  m.def("write_report_files", &write_report_files);
}
