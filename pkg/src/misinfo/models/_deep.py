"""Torch realizations of the deep classifier families.

All nets are small CPU models trained single-threaded with a fixed seed, so
repeated runs are bit-identical. Class imbalance is handled with
inverse-frequency class weights in the loss (not resampling).
"""

from __future__ import annotations

import copy
from pathlib import Path

import numpy as np
import torch
from torch import nn

from misinfo.errors import ValidationError
from misinfo.features.vectorize import FeatureMatrix, SequenceBatch

PARAMETERS_FILE = "params.pt"

DEFAULTS = {
    "DNN": {"epochs": 50, "lr": 1e-3, "batch_size": 32, "hidden": 256},
    "CNN": {"epochs": 50, "lr": 1e-3, "batch_size": 32, "filters": 100, "widths": (3, 4, 5)},
    "BiLSTM": {"epochs": 50, "lr": 1e-3, "batch_size": 32, "hidden": 128},
    "TransformerFT": {"epochs": 3, "lr": 2e-5, "batch_size": 16},
}
PATIENCE = 3


class Dnn(nn.Module):
    def __init__(self, input_dim: int, n_classes: int, hidden: int):
        super().__init__()
        self.layers = nn.Sequential(
            nn.Linear(input_dim, hidden),
            nn.ReLU(),
            nn.Linear(hidden, hidden),
            nn.ReLU(),
            nn.Linear(hidden, n_classes),
        )

    def forward(self, x, lengths=None):
        return self.layers(x)


class TextCnn(nn.Module):
    def __init__(self, input_dim: int, n_classes: int, filters: int, widths):
        super().__init__()
        self.widths = tuple(widths)
        self.convs = nn.ModuleList(
            nn.Conv1d(input_dim, filters, w) for w in self.widths
        )
        self.out = nn.Linear(filters * len(self.widths), n_classes)

    def forward(self, x, lengths=None):
        # x: (B, T, D) -> (B, D, T); pad short sequences up to the widest kernel
        x = x.transpose(1, 2)
        shortfall = max(self.widths) - x.shape[2]
        if shortfall > 0:
            x = nn.functional.pad(x, (0, shortfall))
        pooled = [conv(x).relu().max(dim=2).values for conv in self.convs]
        return self.out(torch.cat(pooled, dim=1))


class BiLstm(nn.Module):
    def __init__(self, input_dim: int, n_classes: int, hidden: int):
        super().__init__()
        self.lstm = nn.LSTM(input_dim, hidden, batch_first=True, bidirectional=True)
        self.out = nn.Linear(2 * hidden, n_classes)

    def forward(self, x, lengths=None):
        if lengths is None:
            lengths = torch.full((x.shape[0],), x.shape[1], dtype=torch.int64)
        packed = nn.utils.rnn.pack_padded_sequence(
            x, lengths.clamp(min=1), batch_first=True, enforce_sorted=False
        )
        _, (h_n, _) = self.lstm(packed)
        return self.out(torch.cat([h_n[0], h_n[1]], dim=1))


class PooledHead(nn.Module):
    """Classification head over a finetunable encoder's pooled output."""

    def __init__(self, input_dim: int, n_classes: int):
        super().__init__()
        self.out = nn.Linear(input_dim, n_classes)

    def forward(self, x, lengths=None):
        return self.out(x)


def _build_net(family: str, input_dim: int, n_classes: int, hp: dict) -> nn.Module:
    if family == "DNN":
        return Dnn(input_dim, n_classes, hp["hidden"])
    if family == "CNN":
        return TextCnn(input_dim, n_classes, hp["filters"], hp["widths"])
    if family == "BiLSTM":
        return BiLstm(input_dim, n_classes, hp["hidden"])
    if family == "TransformerFT":
        return PooledHead(input_dim, n_classes)
    raise ValidationError(f"not a deep family: {family!r}")


def _to_tensors(data) -> tuple[torch.Tensor, torch.Tensor | None]:
    if isinstance(data, SequenceBatch):
        return (
            torch.tensor(data.arrays, dtype=torch.float32),
            torch.tensor(data.lengths, dtype=torch.int64),
        )
    if isinstance(data, FeatureMatrix):
        data = data.values
    return torch.tensor(np.asarray(data), dtype=torch.float32), None


class TorchPredictor:
    def __init__(self, net: nn.Module, family: str, config: dict, label_set):
        self.net = net
        self.family = family
        self.config = config
        self.label_set = label_set

    def scores(self, data) -> np.ndarray:
        x, lengths = _to_tensors(data)
        if x.shape[0] == 0:
            return np.zeros((0, len(self.label_set)))
        self.net.eval()
        with torch.no_grad():
            logits = self.net(x, lengths)
            return torch.softmax(logits, dim=1).numpy().astype(float)

    def save(self, model_dir: Path) -> str:
        torch.save(
            {"state_dict": self.net.state_dict(), "config": self.config},
            model_dir / PARAMETERS_FILE,
        )
        return PARAMETERS_FILE


def _hyperparams(spec) -> dict:
    hp = dict(DEFAULTS[spec.family])
    hp.update(spec.hyperparams)
    return hp


def fit(spec, data, y, label_set, X_val=None, y_val=None) -> TorchPredictor:
    hp = _hyperparams(spec)
    torch.manual_seed(spec.seed)
    torch.set_num_threads(1)

    x, lengths = _to_tensors(data)
    label_index = {label: i for i, label in enumerate(label_set)}
    targets = torch.tensor([label_index[v] for v in y], dtype=torch.int64)
    input_dim = x.shape[-1]

    counts = torch.bincount(targets, minlength=len(label_set)).float()
    weights = targets.shape[0] / (len(label_set) * counts)
    criterion = nn.CrossEntropyLoss(weight=weights)

    net = _build_net(spec.family, input_dim, len(label_set), hp)
    optimizer = torch.optim.Adam(net.parameters(), lr=hp["lr"])

    has_val = X_val is not None and y_val is not None
    if has_val:
        val_x, val_lengths = _to_tensors(X_val)
        val_targets = torch.tensor([label_index[v] for v in y_val], dtype=torch.int64)

    generator = torch.Generator().manual_seed(spec.seed)
    batch_size = hp["batch_size"]
    best_loss, best_state, stale = float("inf"), None, 0
    for _epoch in range(hp["epochs"]):
        net.train()
        order = torch.randperm(targets.shape[0], generator=generator)
        for start in range(0, targets.shape[0], batch_size):
            batch = order[start : start + batch_size]
            optimizer.zero_grad()
            logits = net(x[batch], None if lengths is None else lengths[batch])
            loss = criterion(logits, targets[batch])
            loss.backward()
            optimizer.step()
        if has_val:
            net.eval()
            with torch.no_grad():
                val_loss = criterion(net(val_x, val_lengths), val_targets).item()
            if val_loss < best_loss - 1e-12:
                best_loss, best_state, stale = val_loss, copy.deepcopy(net.state_dict()), 0
            else:
                stale += 1
                if stale >= PATIENCE:
                    break
    if has_val and best_state is not None:
        net.load_state_dict(best_state)

    config = {
        "input_dim": int(input_dim),
        "n_classes": len(label_set),
        "hyperparams": {k: (list(v) if isinstance(v, tuple) else v) for k, v in hp.items()},
    }
    return TorchPredictor(net, spec.family, config, label_set)


def load(parameters_path: Path, spec, label_set) -> TorchPredictor:
    payload = torch.load(parameters_path, weights_only=False)
    config = payload["config"]
    net = _build_net(
        spec.family, config["input_dim"], config["n_classes"], config["hyperparams"]
    )
    net.load_state_dict(payload["state_dict"])
    return TorchPredictor(net, spec.family, config, label_set)
