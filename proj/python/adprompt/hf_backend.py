"""EncoderBackend over a Hugging Face masked-language model.

Checkpoints are resolved by name or path. Downloads are cached under
$ADPROMPT_CHECKPOINT_DIR when it is set, otherwise in the transformers
default cache.
"""

from __future__ import annotations

import os

from ._adprompt import ConfigurationError, EncoderBackend, SpecialToken

CHECKPOINT_DIR_ENV = "ADPROMPT_CHECKPOINT_DIR"


def _cache_dir():
    value = os.environ.get(CHECKPOINT_DIR_ENV)
    return value or None


class HFEncoderBackend(EncoderBackend):
    """Wraps AutoModelForMaskedLM plus a linear head on the first hidden state.

    The MLM head scores the mask position for prompt-based runs; the linear
    head gives the two class logits for plain fine-tuning. Gradients from the
    training loop are pushed through autograd and accumulated until step().
    """

    def __init__(self, checkpoint, device="cpu", prefix_space=None):
        super().__init__()
        try:
            import torch
            from transformers import AutoModelForMaskedLM, AutoTokenizer
        except ImportError as exc:  # pragma: no cover
            raise ConfigurationError(
                "the transformers adapter needs torch and transformers installed"
            ) from exc
        self._torch = torch
        cache = _cache_dir()
        self._checkpoint = str(checkpoint)
        self._tokenizer = AutoTokenizer.from_pretrained(self._checkpoint, cache_dir=cache)
        self._model = AutoModelForMaskedLM.from_pretrained(self._checkpoint, cache_dir=cache)
        self._model.to(device)
        self._device = device
        hidden = self._model.config.hidden_size
        self._cls_head = torch.nn.Linear(hidden, 2).to(device)
        if prefix_space is None:
            # Byte-level BPE vocabularies encode a word differently after a space.
            prefix_space = getattr(self._tokenizer, "add_prefix_space", None) is not None
        self._prefix_space = bool(prefix_space)
        self._optimizer = None
        self._model.eval()

    # Vocabulary.
    def name(self):
        return os.path.basename(self._checkpoint.rstrip("/")) or self._checkpoint

    def vocab_size(self):
        return int(self._model.get_output_embeddings().weight.shape[0])

    def tokenize(self, text):
        stripped = text.strip()
        if not stripped:
            return []
        if self._prefix_space:
            stripped = " " + stripped
        return list(self._tokenizer(stripped, add_special_tokens=False)["input_ids"])

    def special_token(self, which):
        tok = self._tokenizer
        ids = {
            SpecialToken.Cls: tok.cls_token_id if tok.cls_token_id is not None else tok.bos_token_id,
            SpecialToken.Sep: tok.sep_token_id if tok.sep_token_id is not None else tok.eos_token_id,
            SpecialToken.Mask: tok.mask_token_id,
            SpecialToken.Pad: tok.pad_token_id,
            SpecialToken.Unknown: tok.unk_token_id,
        }
        value = ids[which]
        return None if value is None else int(value)

    # Forward passes.
    def _hidden_and_logits(self, model_input, training=False):
        torch = self._torch
        self._model.train(training)
        self._cls_head.train(training)
        ids = torch.tensor([list(model_input.token_ids)], device=self._device)
        out = self._model(input_ids=ids, output_hidden_states=True)
        return out.hidden_states[-1][0], out.logits[0]

    def mlm_logits(self, model_input, position):
        with self._torch.no_grad():
            _, logits = self._hidden_and_logits(model_input)
        return logits[position].double().tolist()

    def cls_logits(self, model_input):
        with self._torch.no_grad():
            hidden, _ = self._hidden_and_logits(model_input)
            scores = self._cls_head(hidden[0])
        return tuple(scores.double().tolist())

    # Training.
    def backward_mlm(self, model_input, position, score_grad):
        torch = self._torch
        _, logits = self._hidden_and_logits(model_input, training=True)
        grad = torch.tensor(score_grad, dtype=logits.dtype, device=self._device)
        (logits[position] * grad).sum().backward()

    def backward_cls(self, model_input, score_grad):
        torch = self._torch
        hidden, _ = self._hidden_and_logits(model_input, training=True)
        scores = self._cls_head(hidden[0])
        grad = torch.tensor(list(score_grad), dtype=scores.dtype, device=self._device)
        (scores * grad).sum().backward()

    def start_training(self, settings, seed):
        torch = self._torch
        torch.manual_seed(seed)
        torch.nn.init.normal_(self._cls_head.weight, std=0.02)
        torch.nn.init.zeros_(self._cls_head.bias)
        params = list(self._model.parameters()) + list(self._cls_head.parameters())
        self._optimizer = torch.optim.AdamW(
            params,
            lr=settings.learning_rate,
            weight_decay=settings.weight_decay,
            betas=(settings.beta1, settings.beta2),
            eps=settings.epsilon,
        )
        self._optimizer.zero_grad()

    def step(self):
        if self._optimizer is None:
            raise ConfigurationError("step() called before start_training()")
        self._optimizer.step()
        self._optimizer.zero_grad()

    def parameter_count(self):
        return sum(p.numel() for p in self._model.parameters()) + sum(
            p.numel() for p in self._cls_head.parameters()
        )
