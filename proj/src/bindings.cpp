#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "adprompt/chat.hpp"
#include "adprompt/corpus.hpp"
#include "adprompt/ensemble.hpp"
#include "adprompt/error.hpp"
#include "adprompt/evaluation.hpp"
#include "adprompt/loss.hpp"
#include "adprompt/pause.hpp"
#include "adprompt/pipeline.hpp"
#include "adprompt/prompt.hpp"
#include "adprompt/records.hpp"
#include "adprompt/report.hpp"
#include "adprompt/synthetic.hpp"
#include "adprompt/text.hpp"
#include "adprompt/toy_backend.hpp"
#include "adprompt/training.hpp"
#include "adprompt/wer.hpp"

namespace py = pybind11;
using namespace adprompt;

namespace {

// Lets Python classes implement the encoder interface.
class PyEncoderBackend : public EncoderBackend {
 public:
  using EncoderBackend::EncoderBackend;

  std::string name() const override {
    PYBIND11_OVERRIDE_PURE(std::string, EncoderBackend, name);
  }
  std::size_t vocab_size() const override {
    PYBIND11_OVERRIDE_PURE(std::size_t, EncoderBackend, vocab_size);
  }
  std::vector<TokenId> tokenize(std::string_view text) const override {
    PYBIND11_OVERRIDE_PURE(std::vector<TokenId>, EncoderBackend, tokenize, std::string(text));
  }
  std::optional<TokenId> special_token(SpecialToken which) const override {
    PYBIND11_OVERRIDE_PURE(std::optional<TokenId>, EncoderBackend, special_token, which);
  }
  std::vector<double> mlm_logits(const ModelInput& input, std::size_t position) const override {
    PYBIND11_OVERRIDE_PURE(std::vector<double>, EncoderBackend, mlm_logits, input, position);
  }
  std::array<double, 2> cls_logits(const ModelInput& input) const override {
    PYBIND11_OVERRIDE_PURE(PYBIND11_TYPE(std::array<double, 2>), EncoderBackend, cls_logits, input);
  }
  void backward_mlm(const ModelInput& input, std::size_t position,
                    std::span<const double> score_grad) override {
    const std::vector<double> grad(score_grad.begin(), score_grad.end());
    PYBIND11_OVERRIDE_PURE(void, EncoderBackend, backward_mlm, input, position, grad);
  }
  void backward_cls(const ModelInput& input, std::array<double, 2> score_grad) override {
    PYBIND11_OVERRIDE_PURE(void, EncoderBackend, backward_cls, input, score_grad);
  }
  void start_training(const OptimizerSettings& settings, std::uint64_t seed) override {
    PYBIND11_OVERRIDE_PURE(void, EncoderBackend, start_training, settings, seed);
  }
  void step() override { PYBIND11_OVERRIDE_PURE(void, EncoderBackend, step); }
  std::size_t parameter_count() const override {
    PYBIND11_OVERRIDE_PURE(std::size_t, EncoderBackend, parameter_count);
  }
};

py::dict wer_dict(const WerResult& r) {
  py::dict d;
  d["substitutions"] = r.substitutions;
  d["deletions"] = r.deletions;
  d["insertions"] = r.insertions;
  d["reference_length"] = r.reference_length;
  d["wer"] = r.wer;
  return d;
}

}  // namespace

PYBIND11_MODULE(_adprompt, m) {
  m.doc() = "Transcript-based dementia detection pipeline";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<NormalizationError>(m, "NormalizationError", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<AlignmentMismatchError>(m, "AlignmentMismatchError", error.ptr());
  py::register_exception<ConfigurationError>(m, "ConfigurationError", error.ptr());
  py::register_exception<NumericError>(m, "NumericError", error.ptr());

  py::enum_<Label>(m, "Label").value("NonAD", Label::NonAD).value("AD", Label::AD);
  py::enum_<Split>(m, "Split").value("Train", Split::Train).value("Test", Split::Test);
  py::enum_<Speaker>(m, "Speaker")
      .value("Participant", Speaker::Participant)
      .value("Interviewer", Speaker::Interviewer);
  py::enum_<Paradigm>(m, "Paradigm").value("TFT", Paradigm::TFT).value("PBFT", Paradigm::PBFT);
  py::enum_<PromptPosition>(m, "PromptPosition")
      .value("Before", PromptPosition::Before)
      .value("After", PromptPosition::After);
  py::enum_<SpecialToken>(m, "SpecialToken")
      .value("Cls", SpecialToken::Cls)
      .value("Sep", SpecialToken::Sep)
      .value("Mask", SpecialToken::Mask)
      .value("Pad", SpecialToken::Pad)
      .value("Unknown", SpecialToken::Unknown);

  // Transcripts.
  m.def("normalize_tokens", [](std::string_view s) { return normalize_tokens(s); },
        py::arg("utterance"));
  m.def(
      "transcript_words",
      [](std::string_view chat, bool include_interviewer) {
        return extract_transcript(parse_chat(chat), include_interviewer
                                                        ? SpeakerFilter::ParticipantAndInterviewer
                                                        : SpeakerFilter::ParticipantOnly)
            .words;
      },
      py::arg("chat"), py::arg("include_interviewer") = false,
      "Normalized words of a CHAT transcript.");
  m.def(
      "parse_chat",
      [](std::string_view chat) {
        py::list out;
        for (const auto& u : parse_chat(chat).utterances) {
          out.append(py::make_tuple(u.speaker, u.raw_text, u.tokens));
        }
        return out;
      },
      py::arg("chat"), "(speaker, raw_text, tokens) per utterance.");

  // Pauses.
  m.def(
      "encode_pauses",
      [](const std::vector<std::string>& words, std::string_view alignment, const std::string& format) {
        NormalizedTranscript t;
        t.words = words;
        const auto fmt = format == "ctm" ? AlignmentFormat::Ctm : AlignmentFormat::Tsv;
        return encode_pauses(t, load_alignment(alignment, fmt)).items;
      },
      py::arg("words"), py::arg("alignment"), py::arg("format") = "tsv");
  m.def("pause_mark", [](double seconds) { return std::string(pause_mark(bin_pause(seconds))); },
        py::arg("seconds"));

  // WER.
  m.def(
      "normalize_for_wer",
      [](std::string_view s, bool split_punctuation) {
        return normalize_for_wer(s, split_punctuation ? PunctuationMode::SplitOnSpace
                                                      : PunctuationMode::Delete);
      },
      py::arg("text"), py::arg("split_punctuation") = false);
  m.def(
      "word_error_rate",
      [](const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
        return wer_dict(word_error_rate(ref, hyp));
      },
      py::arg("reference"), py::arg("hypothesis"));

  // Corpus.
  py::class_<Sample>(m, "Sample")
      .def_readonly("sample_id", &Sample::sample_id)
      .def_readonly("label", &Sample::label)
      .def_readonly("split", &Sample::split)
      .def_readonly("transcript_path", &Sample::transcript_path)
      .def_readonly("alignment_path", &Sample::alignment_path)
      .def_readonly("asr_path", &Sample::asr_path);
  m.def("load_manifest", [](const std::filesystem::path& p, bool check) {
    return load_manifest_file(p, check);
  }, py::arg("path"), py::arg("check_files") = true);
  m.def(
      "make_folds",
      [](const std::vector<Sample>& samples, int k, std::uint64_t seed) {
        return make_folds(samples, k, seed).assignment;
      },
      py::arg("samples"), py::arg("k") = 10, py::arg("seed") = 0);
  m.def(
      "write_synthetic_corpus",
      [](const std::filesystem::path& dir, int ad_train, int control_train, int ad_test,
         int control_test, std::uint64_t seed) {
        return write_synthetic_corpus(dir, {ad_train, control_train, ad_test, control_test, seed});
      },
      py::arg("dir"), py::arg("ad_train") = 15, py::arg("control_train") = 15,
      py::arg("ad_test") = 5, py::arg("control_test") = 5, py::arg("seed") = 7);

  // Modeling.
  py::class_<ModelInput>(m, "ModelInput")
      .def(py::init<>())
      .def_readwrite("token_ids", &ModelInput::token_ids)
      .def_readwrite("mask_index", &ModelInput::mask_index)
      .def_readwrite("paradigm", &ModelInput::paradigm);
  py::class_<OptimizerSettings>(m, "OptimizerSettings")
      .def(py::init<>())
      .def_readwrite("learning_rate", &OptimizerSettings::learning_rate)
      .def_readwrite("weight_decay", &OptimizerSettings::weight_decay)
      .def_readwrite("beta1", &OptimizerSettings::beta1)
      .def_readwrite("beta2", &OptimizerSettings::beta2)
      .def_readwrite("epsilon", &OptimizerSettings::epsilon);

  py::class_<EncoderBackend, PyEncoderBackend>(m, "EncoderBackend")
      .def(py::init<>())
      .def("name", &EncoderBackend::name)
      .def("vocab_size", &EncoderBackend::vocab_size)
      .def("tokenize", &EncoderBackend::tokenize)
      .def("special_token", &EncoderBackend::special_token)
      .def("mlm_logits", &EncoderBackend::mlm_logits)
      .def("cls_logits", &EncoderBackend::cls_logits)
      .def("backward_mlm",
           [](EncoderBackend& b, const ModelInput& in, std::size_t pos, const std::vector<double>& g) {
             b.backward_mlm(in, pos, g);
           })
      .def("backward_cls", &EncoderBackend::backward_cls)
      .def("start_training", &EncoderBackend::start_training)
      .def("step", &EncoderBackend::step)
      .def("parameter_count", &EncoderBackend::parameter_count);

  py::class_<BagOfTokensBackend, EncoderBackend>(m, "ToyBackend")
      .def(py::init<std::vector<std::string>, std::uint64_t, double>(), py::arg("words"),
           py::arg("init_seed") = 0, py::arg("init_scale") = 0.0)
      .def("vocabulary", &BagOfTokensBackend::vocabulary)
      .def("parameters", [](const BagOfTokensBackend& b) {
        return std::vector<double>(b.parameters().begin(), b.parameters().end());
      });

  py::class_<PromptSpec>(m, "PromptSpec")
      .def(py::init<>())
      .def_readwrite("template_text", &PromptSpec::template_text)
      .def_readwrite("position", &PromptSpec::position)
      .def_readwrite("verbalizer", &PromptSpec::verbalizer);
  m.def(
      "build_input_tft",
      [](const std::vector<std::string>& t, const EncoderBackend& b, std::size_t max_len) {
        return build_input_tft(t, b, max_len);
      },
      py::arg("transcript"), py::arg("backend"), py::arg("max_len") = kDefaultMaxLen);
  m.def(
      "build_input_pbft",
      [](const std::vector<std::string>& t, const PromptSpec& s, const EncoderBackend& b,
         std::size_t max_len) { return build_input_pbft(t, s, b, max_len); },
      py::arg("transcript"), py::arg("spec"), py::arg("backend"), py::arg("max_len") = kDefaultMaxLen);
  m.def("verbalize", &verbalize, py::arg("label"), py::arg("backend"), py::arg("spec"));

  py::class_<LossResult>(m, "LossResult")
      .def_readonly("loss", &LossResult::loss)
      .def_readonly("p_ad", &LossResult::p_ad)
      .def_readonly("grad", &LossResult::grad);
  m.def(
      "pbft_loss",
      [](const std::vector<double>& scores, Label gold, TokenId nonad, TokenId ad) {
        return pbft_loss(scores, gold, nonad, ad);
      },
      py::arg("scores"), py::arg("gold"), py::arg("nonad_word"), py::arg("ad_word"));
  m.def("tft_loss", &tft_loss, py::arg("scores"), py::arg("gold"));

  // Training and records.
  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_static("defaults_for", &TrainConfig::defaults_for)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("weight_decay", &TrainConfig::weight_decay)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("max_len", &TrainConfig::max_len)
      .def_readwrite("seed", &TrainConfig::seed);
  py::class_<LabeledExample>(m, "LabeledExample")
      .def(py::init([](std::string id, std::vector<std::string> items, Label label) {
             return LabeledExample{std::move(id), std::move(items), label};
           }),
           py::arg("sample_id"), py::arg("items"), py::arg("label"))
      .def_readwrite("sample_id", &LabeledExample::sample_id)
      .def_readwrite("items", &LabeledExample::items)
      .def_readwrite("label", &LabeledExample::label);
  py::class_<RunIdentity>(m, "RunIdentity")
      .def(py::init<>())
      .def_readwrite("paradigm", &RunIdentity::paradigm)
      .def_readwrite("backend", &RunIdentity::backend)
      .def_readwrite("position", &RunIdentity::position)
      .def_readwrite("seed", &RunIdentity::seed)
      .def_readwrite("fold", &RunIdentity::fold)
      .def_readwrite("variant", &RunIdentity::variant)
      .def("run_id", &RunIdentity::run_id);
  py::class_<PredictionRecord>(m, "PredictionRecord")
      .def_readonly("run_id", &PredictionRecord::run_id)
      .def_readonly("epoch", &PredictionRecord::epoch)
      .def_readonly("sample_id", &PredictionRecord::sample_id)
      .def_readonly("p_ad", &PredictionRecord::p_ad)
      .def_readonly("pred", &PredictionRecord::pred)
      .def_readonly("fold", &PredictionRecord::fold)
      .def_readonly("seed", &PredictionRecord::seed);
  m.attr("TEST_FOLD") = kTestFold;
  m.def(
      "train_run",
      [](const TrainConfig& c, const RunIdentity& id, std::optional<PromptSpec> prompt,
         const std::vector<LabeledExample>& train, const std::vector<LabeledExample>& eval,
         EncoderBackend& backend) {
        return train_run(c, id, prompt ? &*prompt : nullptr, train, eval, backend);
      },
      py::arg("config"), py::arg("identity"), py::arg("prompt"), py::arg("train"),
      py::arg("eval"), py::arg("backend"));
  m.def("to_jsonl", [](const std::vector<PredictionRecord>& r) { return to_jsonl(r); });
  m.def("parse_jsonl", [](std::string_view s) { return parse_jsonl(s); });

  // Ensembling and reporting.
  m.def(
      "vote",
      [](const std::vector<std::pair<Label, double>>& members) {
        std::vector<VoteMember> group;
        for (const auto& [label, p] : members) group.push_back({"", label, p});
        const auto v = vote(group);
        return py::make_tuple(v.label, v.p_ad);
      },
      py::arg("members"), "Majority vote over (label, p_ad) pairs.");
  m.def(
      "summarize",
      [](const std::vector<double>& accs, bool population) {
        const auto s = summarize(accs, population ? StdConvention::Population : StdConvention::Sample);
        py::dict d;
        d["mean"] = s.mean;
        d["std"] = s.std;
        d["max"] = s.max;
        d["n_runs"] = s.n_runs;
        return d;
      },
      py::arg("accuracies"), py::arg("population_std") = false);
  m.def("format_fixed1", &format_fixed1);
  m.def(
      "evaluate_records",
      [](const std::vector<PredictionRecord>& records, const std::vector<Sample>& manifest,
         const std::string& scheme, int last_k) {
        return summary_to_csv(evaluate_records(records, manifest, parse_scheme(scheme), last_k));
      },
      py::arg("records"), py::arg("manifest"), py::arg("scheme") = "all", py::arg("last_k") = 3,
      "Summary CSV text.");
  m.def(
      "render_report",
      [](std::string_view summary_csv) {
        const auto rows = summary_from_csv(summary_csv);
        const auto r = render_report(rows);
        return py::make_tuple(r.text, r.csv, r.warnings);
      },
      py::arg("summary_csv"), "(text, csv, warnings)");
  m.def(
      "run_sweep",
      [](std::string_view config, const std::filesystem::path& manifest,
         const std::filesystem::path& out_dir) {
        const auto spec = SweepSpec::from_config(config);
        const auto samples = load_manifest_file(manifest);
        const auto folds = make_folds(samples, spec.k, spec.fold_seed);
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = run_sweep(spec, samples, folds, out_dir);
        }
        return py::make_tuple(result.runs_total, result.runs_executed);
      },
      py::arg("config"), py::arg("manifest"), py::arg("out_dir"),
      "Runs a toy-backend sweep; returns (runs_total, runs_executed).");
}
