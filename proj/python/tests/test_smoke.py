import os

import pytest

import adprompt as ap


def test_normalize_and_errors():
    assert ap.normalize_tokens("the (..) &uh boy [x 2]") == ["the", "uh", "boy", "boy"]
    with pytest.raises(ap.NormalizationError):
        ap.normalize_tokens("boy [x 0]")
    assert issubclass(ap.ParseError, ap.Error)


def test_pause_marks():
    assert ap.pause_mark(0.2) == ","
    assert ap.pause_mark(1.0) == "."
    assert ap.pause_mark(2.5) == "..."
    with pytest.raises(ap.Error):
        ap.pause_mark(0.0)
    alignment = "the\t0.00\t0.20\tPAR\nSIL\t0.20\t0.40\tPAR\nboy\t0.40\t0.80\tPAR\n"
    assert ap.encode_pauses(["the", "boy"], alignment) == ["the", ",", "boy"]
    with pytest.raises(ap.AlignmentMismatchError):
        ap.encode_pauses(["the", "girl"], alignment)


def test_wer():
    r = ap.word_error_rate(["a", "b", "c"], ["a", "x", "c"])
    assert r["substitutions"] == 1 and r["reference_length"] == 3
    assert r["wer"] == pytest.approx(1 / 3)
    with pytest.raises(ap.Error):
        ap.word_error_rate([], ["a"])
    assert ap.normalize_for_wer("Hello, World!") == ["hello", "world"]


def test_corpus_folds_and_sweep(tmp_path):
    samples = ap.write_synthetic_corpus(tmp_path / "corpus", 6, 6, 2, 2, 3)
    assert len(samples) == 16
    folds = ap.make_folds(samples, 3, 0)
    train_ids = {s.sample_id for s in samples if s.split == ap.Split.Train}
    assert set(folds) == train_ids
    assert sorted(set(folds.values())) == [0, 1, 2]
    assert folds == ap.make_folds(samples, 3, 0)

    config = "paradigms = pbft\npositions = before, after\nseeds = 0\nk = 3\nepochs = 3\n"
    total, executed = ap.run_sweep(config, tmp_path / "corpus" / "manifest.csv", tmp_path / "out")
    assert (total, executed) == (8, 8)
    assert ap.run_sweep(config, tmp_path / "corpus" / "manifest.csv", tmp_path / "out") == (8, 0)
    summary = (tmp_path / "out" / "summary.csv").read_text()
    text, csv, warnings = ap.render_report(summary)
    assert "PBFT" in text


def _toy_examples():
    ad = ["the", "boy", "uh", "...", "cookie", "uh", "..."]
    ctl = ["the", "boy", "takes", "a", "cookie", ","]
    train = [ap.LabeledExample(f"t{i}", ad if i % 2 else ctl, ap.Label.AD if i % 2 else ap.Label.NonAD)
             for i in range(8)]
    evals = [ap.LabeledExample("e0", ad, ap.Label.AD), ap.LabeledExample("e1", ctl, ap.Label.NonAD)]
    return train, evals


def test_toy_training_roundtrip():
    train, evals = _toy_examples()
    words = sorted({w for ex in train for w in ex.items} |
                   {"diagnosis", "result", "is", "alzheimer", "healthy"})
    backend = ap.ToyBackend(words)
    spec = ap.PromptSpec()
    assert ap.verbalize(ap.Label.AD, backend, spec) != ap.verbalize(ap.Label.NonAD, backend, spec)
    config = ap.TrainConfig.defaults_for(ap.Paradigm.PBFT)
    config.epochs = 5
    config.learning_rate = 0.05
    ident = ap.RunIdentity()
    ident.paradigm = ap.Paradigm.PBFT
    ident.backend = "toy"
    records = ap.train_run(config, ident, spec, train, evals, backend)
    assert len(records) == 10
    last = {r.sample_id: r.pred for r in records if r.epoch == 5}
    assert last == {"e0": ap.Label.AD, "e1": ap.Label.NonAD}
    again = ap.parse_jsonl(ap.to_jsonl(records))
    assert [r.p_ad for r in again] == [r.p_ad for r in records]


class _ConstantBackend(ap.EncoderBackend):
    """Python-side backend: checks the trampoline reaches overrides."""

    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "x", "alzheimer", "healthy", "the",
             "diagnosis", "result", "is"]

    def __init__(self):
        super().__init__()
        self.steps = 0

    def name(self):
        return "const"

    def vocab_size(self):
        return len(self.vocab)

    def tokenize(self, text):
        return [self.vocab.index(w) if w in self.vocab else 1 for w in text.lower().split()]

    def special_token(self, which):
        return {ap.SpecialToken.Pad: 0, ap.SpecialToken.Unknown: 1, ap.SpecialToken.Cls: 2,
                ap.SpecialToken.Sep: 3, ap.SpecialToken.Mask: 4}[which]

    def mlm_logits(self, model_input, position):
        scores = [0.0] * len(self.vocab)
        scores[6] = 1.0
        return scores

    def cls_logits(self, model_input):
        return (0.0, 1.0)

    def backward_mlm(self, model_input, position, grad):
        assert len(grad) == len(self.vocab)

    def backward_cls(self, model_input, grad):
        pass

    def start_training(self, settings, seed):
        pass

    def step(self):
        self.steps += 1

    def parameter_count(self):
        return 0


def test_python_backend_trampoline():
    backend = _ConstantBackend()
    train = [ap.LabeledExample("a", ["x"], ap.Label.AD), ap.LabeledExample("b", ["x"], ap.Label.NonAD)]
    evals = [ap.LabeledExample("c", ["x"], ap.Label.AD)]
    config = ap.TrainConfig.defaults_for(ap.Paradigm.PBFT)
    config.epochs = 2
    ident = ap.RunIdentity()
    ident.backend = "const"
    records = ap.train_run(config, ident, ap.PromptSpec(), train, evals, backend)
    assert backend.steps == 4
    assert all(r.pred == ap.Label.AD for r in records)
    assert records[0].p_ad == pytest.approx(1 / (1 + pytest.importorskip("math").exp(-1.0)))


def _tiny_bert(path):
    transformers = pytest.importorskip("transformers")
    pytest.importorskip("torch")
    words = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "the", "diagnosis", "result", "is",
             "alzheimer", "healthy", "boy", "cookie", "uh", ".", ","]
    path.mkdir()
    (path / "vocab.txt").write_text("\n".join(words) + "\n")
    tok = transformers.BertTokenizer(str(path / "vocab.txt"))
    cfg = transformers.BertConfig(vocab_size=len(words), hidden_size=16, num_hidden_layers=1,
                                  num_attention_heads=2, intermediate_size=32,
                                  max_position_embeddings=64)
    transformers.BertForMaskedLM(cfg).save_pretrained(str(path))
    tok.save_pretrained(str(path))


def test_hf_adapter_on_tiny_random_model(tmp_path, monkeypatch):
    _tiny_bert(tmp_path / "tiny")
    monkeypatch.setenv("ADPROMPT_CHECKPOINT_DIR", str(tmp_path / "cache"))
    backend = ap.hf_backend(tmp_path / "tiny")
    spec = ap.PromptSpec()
    assert backend.tokenize("alzheimer") == [9]
    model_input = ap.build_input_pbft(["the", "boy", "uh"], spec, backend)
    assert model_input.mask_index is not None
    config = ap.TrainConfig.defaults_for(ap.Paradigm.PBFT)
    config.epochs = 1
    config.learning_rate = 1e-3
    train = [ap.LabeledExample("a", ["the", "boy", "uh"], ap.Label.AD),
             ap.LabeledExample("b", ["the", "cookie", ","], ap.Label.NonAD)]
    records = ap.train_run(config, ap.RunIdentity(), spec, train, train, backend)
    assert len(records) == 2
    assert all(0.0 < r.p_ad < 1.0 for r in records)

    bad = ap.PromptSpec()
    bad.verbalizer = ["healthy", "alzheimer disease"]
    with pytest.raises(ap.Error, match="single"):
        ap.verbalize(ap.Label.AD, backend, bad)
