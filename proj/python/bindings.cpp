#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maskattack/attack.hpp"
#include "maskattack/defense.hpp"
#include "maskattack/frame_select.hpp"
#include "maskattack/metrics.hpp"
#include "maskattack/pipeline.hpp"

namespace py = pybind11;
using namespace maskattack;

PYBIND11_MODULE(_core, m) {
  m.doc() = "black-box adversarial audio via psychoacoustic frequency masking";

  py::register_exception<Error>(m, "MaskAttackError");

  py::class_<AudioBuffer>(m, "AudioBuffer")
      .def(py::init<>())
      .def(py::init([](std::vector<double> samples, int rate) {
             return AudioBuffer{std::move(samples), rate};
           }),
           py::arg("samples"), py::arg("sample_rate_hz") = kPipelineRateHz)
      .def_readwrite("samples", &AudioBuffer::samples)
      .def_readwrite("sample_rate_hz", &AudioBuffer::sample_rate_hz)
      .def("__len__", &AudioBuffer::size)
      .def_property_readonly("duration_s", &AudioBuffer::duration_s);

  py::enum_<WindowKind>(m, "WindowKind")
      .value("hann", WindowKind::hann)
      .value("rectangular", WindowKind::rectangular);

  py::class_<StftConfig>(m, "StftConfig")
      .def(py::init<>())
      .def(py::init([](int frame_len, int hop, WindowKind w) {
             return StftConfig{frame_len, hop, w};
           }),
           py::arg("frame_len") = 2048, py::arg("hop") = 512,
           py::arg("window") = WindowKind::hann)
      .def_readwrite("frame_len", &StftConfig::frame_len)
      .def_readwrite("hop", &StftConfig::hop)
      .def_readwrite("window", &StftConfig::window);

  py::class_<Spectrogram>(m, "Spectrogram")
      .def_readwrite("frames", &Spectrogram::frames)
      .def_readwrite("config", &Spectrogram::config)
      .def_readwrite("original_len", &Spectrogram::original_len)
      .def_readwrite("sample_rate_hz", &Spectrogram::sample_rate_hz)
      .def_property_readonly("frame_count", &Spectrogram::frame_count)
      .def_property_readonly("bins", &Spectrogram::bins);

  py::class_<PsdFrame>(m, "PsdFrame")
      .def_readonly("psd_db", &PsdFrame::psd_db)
      .def_readonly("norm_offset_db", &PsdFrame::norm_offset_db)
      .def_readonly("frame_len", &PsdFrame::frame_len)
      .def_readonly("bin_freqs_hz", &PsdFrame::bin_freqs_hz);

  m.def("read_wav", &read_wav, py::arg("path"),
        py::arg("expect_rate_hz") = kPipelineRateHz,
        py::arg("allow_resample") = false);
  m.def("write_wav", &write_wav, py::arg("audio"), py::arg("path"));
  m.def("resample_linear", &resample_linear, py::arg("audio"),
        py::arg("target_rate_hz"));

  m.def("stft", &stft, py::arg("audio"), py::arg("config") = StftConfig{});
  m.def("istft", &istft, py::arg("spectrogram"));
  m.def("stft_frame_count", &stft_frame_count, py::arg("length"), py::arg("config"));
  m.def("psd_of_frame", &psd_of_frame, py::arg("frame"), py::arg("frame_len"),
        py::arg("sample_rate_hz") = kPipelineRateHz);
  m.def("amplitude_from_psd", &amplitude_from_psd, py::arg("psd"));

  m.def("ath", &ath, py::arg("freq_hz"));
  m.def("bark", &bark, py::arg("freq_hz"));

  py::class_<Masker>(m, "Masker")
      .def_readonly("bin", &Masker::bin)
      .def_readonly("psd_db", &Masker::psd_db)
      .def_readonly("bark", &Masker::bark);
  py::class_<MaskingAnalysis>(m, "MaskingAnalysis")
      .def_readonly("maskers", &MaskingAnalysis::maskers)
      .def_readonly("maskee_bins", &MaskingAnalysis::maskee_bins)
      .def_readonly("ath_db", &MaskingAnalysis::ath_db)
      .def_readonly("global_threshold_db", &MaskingAnalysis::global_threshold_db)
      .def_readonly("norm_offset_db", &MaskingAnalysis::norm_offset_db);
  m.def("analyze_frame", &analyze_frame, py::arg("psd"));

  py::enum_<PhaseInit>(m, "PhaseInit")
      .value("random_phase", PhaseInit::random_phase)
      .value("zero_phase", PhaseInit::zero_phase)
      .value("provided_phase", PhaseInit::provided_phase);
  py::class_<GriffinLimConfig>(m, "GriffinLimConfig")
      .def(py::init<>())
      .def_readwrite("iterations", &GriffinLimConfig::iterations)
      .def_readwrite("rng_seed", &GriffinLimConfig::rng_seed)
      .def_readwrite("init", &GriffinLimConfig::init);
  py::class_<GriffinLimResult>(m, "GriffinLimResult")
      .def_readonly("audio", &GriffinLimResult::audio)
      .def_readonly("spectrogram", &GriffinLimResult::spectrogram)
      .def_readonly("convergence_errors", &GriffinLimResult::convergence_errors);
  m.def(
      "griffin_lim",
      [](const std::vector<std::vector<double>>& mag, const StftConfig& sc,
         const GriffinLimConfig& gc, std::size_t output_len, int rate) {
        return griffin_lim(mag, sc, gc, output_len, nullptr, rate);
      },
      py::arg("target_magnitude"), py::arg("stft_config") = StftConfig{},
      py::arg("gl_config") = GriffinLimConfig{}, py::arg("output_len") = 0,
      py::arg("sample_rate_hz") = kPipelineRateHz);

  py::enum_<AttackMethod>(m, "AttackMethod")
      .value("GL", AttackMethod::GL)
      .value("OP", AttackMethod::OP)
      .value("DE", AttackMethod::DE);
  py::enum_<RaisePolicy>(m, "RaisePolicy")
      .value("raise_only", RaisePolicy::raise_only)
      .value("set_exact", RaisePolicy::set_exact);
  py::class_<AttackConfig>(m, "AttackConfig")
      .def(py::init<>())
      .def_readwrite("method", &AttackConfig::method)
      .def_readwrite("stft", &AttackConfig::stft)
      .def_readwrite("gl", &AttackConfig::gl)
      .def_readwrite("raise_policy", &AttackConfig::raise_policy);
  py::class_<AttackResult>(m, "AttackResult")
      .def_readonly("adversarial_audio", &AttackResult::adversarial_audio)
      .def_readonly("attacked_spectrogram", &AttackResult::attacked_spectrogram)
      .def_readonly("per_frame_modified_bins", &AttackResult::per_frame_modified_bins);
  m.def("run_attack", &run_attack, py::arg("audio"), py::arg("config"));
  m.def("combine", &combine, py::arg("original"), py::arg("attacked"),
        py::arg("selected_frames"));

  py::enum_<SelectionStrategy>(m, "SelectionStrategy")
      .value("all", SelectionStrategy::all)
      .value("random", SelectionStrategy::random)
      .value("important", SelectionStrategy::important);
  py::class_<FrameSelection>(m, "FrameSelection")
      .def_readonly("indices", &FrameSelection::indices)
      .def_readonly("strategy", &FrameSelection::strategy)
      .def_readonly("wer_per_frame", &FrameSelection::wer_per_frame);
  m.def("select_all", &select_all, py::arg("frame_count"));
  m.def("select_random", &select_random, py::arg("frame_count"), py::arg("k"),
        py::arg("seed"));

  py::class_<Transcriber, std::shared_ptr<Transcriber>>(m, "Transcriber")
      .def("transcribe",
           [](Transcriber& t, const AudioBuffer& a) { return t.transcribe(a).text; });
  py::class_<MockTranscriber, Transcriber, std::shared_ptr<MockTranscriber>>(
      m, "MockTranscriber")
      .def(py::init<>());
  m.def("make_transcriber", &make_transcriber, py::arg("spec"),
        py::arg("api_key_env") = "");
  m.def("canonicalize_transcript", &canonicalize_transcript, py::arg("raw"));

  m.def("wer", [](const std::string& r, const std::string& h) { return wer(r, h).first; },
        py::arg("reference"), py::arg("hypothesis"));
  m.def("cer", [](const std::string& r, const std::string& h) { return cer(r, h).first; },
        py::arg("reference"), py::arg("hypothesis"));
  m.def("success_rate", &success_rate, py::arg("wers"));
  m.def("segmental_snr", &segmental_snr, py::arg("original"), py::arg("adversarial"),
        py::arg("segment_len") = 512, py::arg("clamp_lo") = -10.0,
        py::arg("clamp_hi") = 35.0);
  m.def("log_spectral_distance", &log_spectral_distance, py::arg("original"),
        py::arg("adversarial"), py::arg("config") = StftConfig{});
  m.def("pareto_front", &pareto_front, py::arg("points"));
  m.def("auc", &auc, py::arg("benign_scores"), py::arg("adversarial_scores"));

  py::enum_<TransformKind>(m, "TransformKind")
      .value("down_up_sample", TransformKind::down_up_sample)
      .value("quantize_dequantize", TransformKind::quantize_dequantize)
      .value("median_filter", TransformKind::median_filter);
  py::class_<AudioTransform>(m, "AudioTransform")
      .def(py::init<>())
      .def_readwrite("kind", &AudioTransform::kind)
      .def_readwrite("target_rate_hz", &AudioTransform::target_rate_hz)
      .def_readwrite("bits", &AudioTransform::bits)
      .def_readwrite("width", &AudioTransform::width);
  m.def("transform_audio", &transform_audio, py::arg("audio"), py::arg("transform"));
}
