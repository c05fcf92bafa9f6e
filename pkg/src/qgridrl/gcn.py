"""Two-layer graph convolution with mean pooling, plus the angle projection.

Forward pass for one graph with node features X (|V| x d)::

    H0 = X @ Wi + bi                   (d -> 64)
    L1 = relu(A_hat @ H0 @ W1 + b1)    (64 -> 64)
    L2 = relu(A_hat @ L1 @ W2 + b2)    (64 -> 128)
    pooled = mean over nodes of L2

with A_hat = D^-1/2 (A + I) D^-1/2. Gradients are written out by hand; the
batched routines take a stack of graphs sharing the node count.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Sequence, Tuple

import numpy as np

from .errors import ShapeError
from .pqc import PQCParameters

H0_DIM = 64
H1_DIM = 64
H2_DIM = 128


@dataclass
class ObservationGraph:
    node_features: np.ndarray
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        self.node_features = np.asarray(self.node_features, dtype=float)
        if self.node_features.ndim != 2:
            raise ShapeError("node_features must be a |V| x d matrix")
        n = self.node_features.shape[0]
        self.edges = tuple((int(i), int(j)) for i, j in self.edges)
        for i, j in self.edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ShapeError(f"edge ({i}, {j}) references a missing node")
            if i == j:
                raise ShapeError(f"self-loop on node {i} in edge list")

    @property
    def n_nodes(self) -> int:
        return self.node_features.shape[0]

    def normalized_adjacency(self) -> np.ndarray:
        return normalized_adjacency(self.n_nodes, self.edges)


def normalized_adjacency(n_nodes: int, edges: Sequence[Tuple[int, int]]) -> np.ndarray:
    a = np.eye(n_nodes)
    for i, j in edges:
        # parallel lines collapse to one edge
        a[i, j] = a[j, i] = 1.0
    d = 1.0 / np.sqrt(a.sum(axis=1))
    return a * d[:, None] * d[None, :]


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


@dataclass
class GCNWeights:
    input_proj: np.ndarray
    input_bias: np.ndarray
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    @classmethod
    def init(cls, in_dim: int, rng: np.random.Generator) -> "GCNWeights":
        return cls(
            input_proj=glorot(rng, in_dim, H0_DIM),
            input_bias=np.zeros(H0_DIM),
            w1=glorot(rng, H0_DIM, H1_DIM),
            b1=np.zeros(H1_DIM),
            w2=glorot(rng, H1_DIM, H2_DIM),
            b2=np.zeros(H2_DIM),
        )

    @classmethod
    def zeros(cls, in_dim: int) -> "GCNWeights":
        return cls(np.zeros((in_dim, H0_DIM)), np.zeros(H0_DIM), np.zeros((H0_DIM, H1_DIM)),
                   np.zeros(H1_DIM), np.zeros((H1_DIM, H2_DIM)), np.zeros(H2_DIM))

    @property
    def in_dim(self) -> int:
        return self.input_proj.shape[0]

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def check(self):
        if self.input_proj.shape[1] != H0_DIM or self.w1.shape != (H0_DIM, H1_DIM) \
                or self.w2.shape != (H1_DIM, H2_DIM):
            raise ShapeError("GCN weights do not match the 64 -> 64 -> 128 layout")


def gcn_forward_batch(x: np.ndarray, a_hat: np.ndarray, w: GCNWeights):
    """Batched forward. ``x`` is (B, V, d), ``a_hat`` is (B, V, V).

    Returns ``(pooled, l2, cache)``; ``cache`` feeds :func:`gcn_backward`.
    """
    if x.ndim != 3 or a_hat.shape != (x.shape[0], x.shape[1], x.shape[1]):
        raise ShapeError(f"inconsistent batch shapes {x.shape} / {a_hat.shape}")
    if x.shape[2] != w.in_dim:
        raise ShapeError(f"node feature width {x.shape[2]} != weight input width {w.in_dim}")
    h0 = x @ w.input_proj + w.input_bias
    a1 = a_hat @ h0
    z1 = a1 @ w.w1 + w.b1
    l1 = np.maximum(z1, 0.0)
    a2 = a_hat @ l1
    z2 = a2 @ w.w2 + w.b2
    l2 = np.maximum(z2, 0.0)
    pooled = l2.mean(axis=1)
    cache = (x, a_hat, a1, z1, a2, z2)
    return pooled, l2, cache


def gcn_backward(cache, d_pooled: np.ndarray, w: GCNWeights) -> dict:
    """Parameter gradients given d(loss)/d(pooled) of shape (B, 128)."""
    x, a_hat, a1, z1, a2, z2 = cache
    n_nodes = x.shape[1]
    a_t = np.swapaxes(a_hat, 1, 2)
    d_z2 = np.broadcast_to(d_pooled[:, None, :] / n_nodes, z2.shape) * (z2 > 0)
    grads = {
        "w2": np.einsum("bvi,bvj->ij", a2, d_z2),
        "b2": d_z2.sum(axis=(0, 1)),
    }
    d_z1 = (a_t @ (d_z2 @ w.w2.T)) * (z1 > 0)
    grads["w1"] = np.einsum("bvi,bvj->ij", a1, d_z1)
    grads["b1"] = d_z1.sum(axis=(0, 1))
    d_h0 = a_t @ (d_z1 @ w.w1.T)
    grads["input_proj"] = np.einsum("bvi,bvj->ij", x, d_h0)
    grads["input_bias"] = d_h0.sum(axis=(0, 1))
    return grads


def gcn_forward(obs: ObservationGraph, w: GCNWeights):
    """Single-graph forward; returns ``(pooled, l2)``."""
    pooled, l2, _ = gcn_forward_batch(
        obs.node_features[None], obs.normalized_adjacency()[None], w
    )
    return pooled[0], l2[0]


def project_to_angles(pooled: np.ndarray, proj: np.ndarray) -> PQCParameters:
    """Rotation angles pi * tanh(pooled @ proj), one pair per qubit."""
    pooled = np.asarray(pooled, dtype=float)
    if proj.ndim != 2 or proj.shape[0] != pooled.shape[-1] or proj.shape[1] % 2:
        raise ShapeError(f"angle projection shape {proj.shape} does not fit pooled {pooled.shape}")
    theta = np.pi * np.tanh(pooled @ proj)
    return PQCParameters(theta, n_qubits=proj.shape[1] // 2)
