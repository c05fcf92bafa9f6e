"""PPO over the concatenated GCN + quantum feature vector.

The policy and value heads are linear maps of ``pooled || quantum`` (256
wide), or of ``pooled`` alone for the benchmark network. All gradients are
computed by hand in float64; the quantum feature is a constant input.
"""
from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import BackendUnavailableError, ShapeError, TrainingAborted
from .gcn import H2_DIM, GCNWeights, ObservationGraph, gcn_backward, gcn_forward_batch, glorot, \
    project_to_angles
from .opponent import Opponent, OpponentConfig
from .pqc import DEFAULT_H2, QuantumFeature, QuantumFeatureProvider, RescaleRange, make_backend

log = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class PPOConfig:
    gamma: float = 0.99
    lam: float = 0.98
    learning_rate: float = 1e-4
    entropy_coef: float = 1e-3
    value_coef: float = 0.4
    clip_eps: float = 0.2
    epochs_per_update: int = 4
    minibatch_size: int = 64
    steps_per_rollout: int = 512
    max_grad_norm: float = 0.5
    normalize_advantage: bool = True
    mask_illegal: bool = True

    def __post_init__(self):
        if not (0 < self.gamma <= 1 and 0 < self.lam <= 1):
            raise ValueError("gamma and lambda must lie in (0, 1]")
        if self.clip_eps <= 0:
            raise ValueError("clip_eps must be > 0")
        if self.minibatch_size < 1 or self.steps_per_rollout < 1 or self.epochs_per_update < 1:
            raise ValueError("batch sizes and epochs must be >= 1")


@dataclass(frozen=True)
class QuantumConfig:
    procedure: str = "hybrid"
    refresh_interval: float = 50
    n_qubits: int = 4
    backend: str = "exact"
    shots: int = 1024
    seed: int = 0
    rescale: Tuple[float, float] = (0.0, 1.0)
    h2: int = DEFAULT_H2

    def provider(self) -> QuantumFeatureProvider:
        backend = make_backend(self.backend, self.shots, self.seed)
        return QuantumFeatureProvider(self.procedure, self.refresh_interval, backend, self.seed,
                                      RescaleRange(*self.rescale), self.h2)

    @property
    def uses_quantum(self) -> bool:
        return self.procedure != "none"


# --------------------------------------------------------------------------
# network


@dataclass
class PolicyNetwork:
    gcn: GCNWeights
    angle_proj: np.ndarray
    policy_w: np.ndarray
    policy_b: np.ndarray
    value_w: np.ndarray
    value_b: np.ndarray
    use_quantum: bool = True
    # restrict the action distribution to currently legal actions
    mask_illegal: bool = True

    @classmethod
    def init(cls, in_dim: int, n_actions: int, n_qubits: int = 4, use_quantum: bool = True,
             seed: int = 0, mask_illegal: bool = False) -> "PolicyNetwork":
        rng = np.random.default_rng(seed)
        width = 2 * H2_DIM if use_quantum else H2_DIM
        return cls(
            gcn=GCNWeights.init(in_dim, rng),
            angle_proj=glorot(rng, H2_DIM, 2 * n_qubits),
            policy_w=0.01 * glorot(rng, width, n_actions),
            policy_b=np.zeros(n_actions),
            value_w=glorot(rng, width, 1),
            value_b=np.zeros(1),
            use_quantum=use_quantum,
            mask_illegal=mask_illegal,
        )

    @property
    def n_actions(self) -> int:
        return self.policy_w.shape[1]

    @property
    def head_width(self) -> int:
        return self.policy_w.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.angle_proj.shape[1] // 2

    def params(self) -> Dict[str, np.ndarray]:
        out = {f"gcn.{k}": v for k, v in self.gcn.as_dict().items()}
        out.update(angle_proj=self.angle_proj, policy_w=self.policy_w, policy_b=self.policy_b,
                   value_w=self.value_w, value_b=self.value_b)
        return out

    def set_params(self, params: Dict[str, np.ndarray]):
        for name, value in params.items():
            if name.startswith("gcn."):
                setattr(self.gcn, name[4:], value)
            else:
                setattr(self, name, value)

    def copy(self) -> "PolicyNetwork":
        net = PolicyNetwork.init(self.gcn.in_dim, self.n_actions, self.n_qubits, self.use_quantum,
                                 mask_illegal=self.mask_illegal)
        net.set_params({k: v.copy() for k, v in self.params().items()})
        return net

    def check(self, in_dim: Optional[int] = None, n_actions: Optional[int] = None):
        self.gcn.check()
        if self.head_width != (2 * H2_DIM if self.use_quantum else H2_DIM):
            raise ShapeError(f"head width {self.head_width} does not match use_quantum={self.use_quantum}")
        if in_dim is not None and self.gcn.in_dim != in_dim:
            raise ShapeError(f"network expects {self.gcn.in_dim} node features, grid gives {in_dim}")
        if n_actions is not None and self.n_actions != n_actions:
            raise ShapeError(f"network has {self.n_actions} actions, grid has {n_actions}")

    # -- forward pieces

    def pooled(self, obs: ObservationGraph) -> np.ndarray:
        pooled, _, _ = gcn_forward_batch(obs.node_features[None], obs.normalized_adjacency()[None],
                                         self.gcn)
        return pooled[0]

    def angles(self, pooled: np.ndarray):
        return project_to_angles(pooled, self.angle_proj)

    def heads(self, pooled: np.ndarray, qvec: Optional[np.ndarray]):
        if self.use_quantum:
            if qvec is None or qvec.shape[-1] != H2_DIM:
                raise ShapeError(f"quantum feature must have length {H2_DIM}")
            x = np.concatenate([pooled, qvec], axis=-1)
        else:
            x = pooled
        logits = x @ self.policy_w + self.policy_b
        value = (x @ self.value_w + self.value_b)[..., 0]
        return x, logits, value


MASKED_LOGIT = -1e9


def apply_mask(logits: np.ndarray, mask: Optional[np.ndarray]) -> np.ndarray:
    """Push masked-out logits to a large negative value (finite, so entropy stays defined)."""
    return logits if mask is None else np.where(mask, logits, MASKED_LOGIT)


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


def forward(net: PolicyNetwork, obs: ObservationGraph, qfeat: Optional[QuantumFeature]):
    """Action probabilities and value estimate for one observation."""
    pooled = net.pooled(obs)
    _, logits, value = net.heads(pooled, None if qfeat is None else qfeat.vector)
    return softmax(logits), float(value)


# --------------------------------------------------------------------------
# rollout data and advantages


@dataclass
class RolloutBatch:
    node_features: np.ndarray   # (T, V, d)
    adjacency: np.ndarray       # (T, V, V) normalized
    quantum: Optional[np.ndarray]  # (T, 128) or None
    actions: np.ndarray
    log_probs: np.ndarray
    rewards: np.ndarray
    values: np.ndarray
    dones: np.ndarray
    last_value: float = 0.0
    advantages: Optional[np.ndarray] = None
    returns: Optional[np.ndarray] = None
    masks: Optional[np.ndarray] = None  # (T, A) legal actions, when masking

    def __len__(self):
        return len(self.actions)

    def subset(self, idx) -> "RolloutBatch":
        return RolloutBatch(
            self.node_features[idx], self.adjacency[idx],
            None if self.quantum is None else self.quantum[idx],
            self.actions[idx], self.log_probs[idx], self.rewards[idx], self.values[idx],
            self.dones[idx], self.last_value,
            None if self.advantages is None else self.advantages[idx],
            None if self.returns is None else self.returns[idx],
            None if self.masks is None else self.masks[idx],
        )


def gae(rewards, values, dones, last_value, gamma, lam):
    """Generalized advantage estimates and returns; ``dones[t]`` ends an episode after step t."""
    rewards = np.asarray(rewards, dtype=float)
    values = np.asarray(values, dtype=float)
    dones = np.asarray(dones, dtype=float)
    n = len(rewards)
    adv = np.zeros(n)
    next_value, next_adv = float(last_value), 0.0
    for t in range(n - 1, -1, -1):
        keep = 1.0 - dones[t]
        delta = rewards[t] + gamma * next_value * keep - values[t]
        next_adv = delta + gamma * lam * keep * next_adv
        adv[t] = next_adv
        next_value = values[t]
    return adv, adv + values


def compute_gae(batch: RolloutBatch, cfg: PPOConfig):
    adv, ret = gae(batch.rewards, batch.values, batch.dones, batch.last_value, cfg.gamma, cfg.lam)
    batch.advantages, batch.returns = adv, ret
    return adv, ret


def clipped_surrogate(ratio, advantage, clip_eps):
    """Per-sample PPO objective ``min(r A, clip(r, 1-eps, 1+eps) A)``."""
    ratio = np.asarray(ratio, dtype=float)
    advantage = np.asarray(advantage, dtype=float)
    return np.minimum(ratio * advantage, np.clip(ratio, 1 - clip_eps, 1 + clip_eps) * advantage)


# --------------------------------------------------------------------------
# loss and gradients


def ppo_loss(batch: RolloutBatch, net: PolicyNetwork, cfg: PPOConfig):
    """Clipped PPO loss on ``batch`` with hand-derived gradients.

    ``batch.advantages`` are used as given (normalize before calling).
    Returns ``(loss, grads, stats)`` with ``grads`` keyed like ``net.params()``.
    """
    b = len(batch)
    pooled, _, cache = gcn_forward_batch(batch.node_features, batch.adjacency, net.gcn)
    x, logits, values = net.heads(pooled, batch.quantum)
    logits = apply_mask(logits, batch.masks)
    logp_all = log_softmax(logits)
    probs = np.exp(logp_all)
    rows = np.arange(b)
    logp = logp_all[rows, batch.actions]
    ratio = np.exp(logp - batch.log_probs)
    adv = batch.advantages
    surr = clipped_surrogate(ratio, adv, cfg.clip_eps)
    policy_loss = -surr.mean()
    value_err = values - batch.returns
    value_loss = np.mean(value_err**2)
    entropy_each = -(probs * logp_all).sum(axis=1)
    entropy = entropy_each.mean()
    loss = policy_loss + cfg.value_coef * value_loss - cfg.entropy_coef * entropy

    # gradient flows through r*A only when it is the smaller branch
    unclipped = ratio * adv <= np.clip(ratio, 1 - cfg.clip_eps, 1 + cfg.clip_eps) * adv
    d_logp = -(unclipped * ratio * adv) / b
    onehot = np.zeros_like(logits)
    onehot[rows, batch.actions] = 1.0
    d_logits = d_logp[:, None] * (onehot - probs)
    # dH/dz_k = -p_k (log p_k + H)
    d_logits += cfg.entropy_coef / b * probs * (logp_all + entropy_each[:, None])
    d_values = 2.0 * cfg.value_coef * value_err / b

    grads = {
        "policy_w": x.T @ d_logits,
        "policy_b": d_logits.sum(axis=0),
        "value_w": x.T @ d_values[:, None],
        "value_b": np.array([d_values.sum()]),
        "angle_proj": np.zeros_like(net.angle_proj),
    }
    d_x = d_logits @ net.policy_w.T + d_values[:, None] @ net.value_w.T
    d_pooled = d_x[:, :H2_DIM]
    for k, g in gcn_backward(cache, d_pooled, net.gcn).items():
        grads[f"gcn.{k}"] = g
    stats = {
        "policy_loss": float(policy_loss),
        "value_loss": float(value_loss),
        "entropy": float(entropy),
        "clip_fraction": float(np.mean(np.abs(ratio - 1) > cfg.clip_eps)),
    }
    return float(loss), grads, stats


class Adam:
    def __init__(self, lr: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self.m: Dict[str, np.ndarray] = {}
        self.v: Dict[str, np.ndarray] = {}

    def step(self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]):
        self.t += 1
        c1 = 1 - self.beta1**self.t
        c2 = 1 - self.beta2**self.t
        for name, g in grads.items():
            m = self.m.setdefault(name, np.zeros_like(g))
            v = self.v.setdefault(name, np.zeros_like(g))
            m *= self.beta1
            m += (1 - self.beta1) * g
            v *= self.beta2
            v += (1 - self.beta2) * g * g
            params[name] -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)

    def state_dict(self) -> Dict[str, np.ndarray]:
        out = {f"adam.m.{k}": v for k, v in self.m.items()}
        out.update({f"adam.v.{k}": v for k, v in self.v.items()})
        return out

    def load_state_dict(self, arrays: Dict[str, np.ndarray], t: int):
        self.t = t
        for key, value in arrays.items():
            kind, name = key[5], key[7:]
            (self.m if kind == "m" else self.v)[name] = value.copy()


def clip_grad_norm(grads: Dict[str, np.ndarray], max_norm: float) -> float:
    total = math.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if max_norm and total > max_norm:
        scale = max_norm / (total + 1e-12)
        for g in grads.values():
            g *= scale
    return total


def ppo_update(net: PolicyNetwork, batch: RolloutBatch, cfg: PPOConfig, opt: Adam,
               rng: np.random.Generator) -> dict:
    """Several epochs of minibatch steps on one rollout."""
    compute_gae(batch, cfg)
    if cfg.normalize_advantage and len(batch) > 1:
        a = batch.advantages
        batch.advantages = (a - a.mean()) / (a.std() + 1e-8)
    params = net.params()
    stats: List[dict] = []
    skipped = 0
    n = len(batch)
    for _ in range(cfg.epochs_per_update):
        order = rng.permutation(n)
        for start in range(0, n, cfg.minibatch_size):
            mb = batch.subset(order[start:start + cfg.minibatch_size])
            loss, grads, st = ppo_loss(mb, net, cfg)
            if not np.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in grads.values()):
                skipped += 1
                continue
            clip_grad_norm(grads, cfg.max_grad_norm)
            opt.step(params, grads)
            stats.append(st)
    out = {k: float(np.mean([s[k] for s in stats])) if stats else float("nan")
           for k in ("policy_loss", "value_loss", "entropy", "clip_fraction")}
    out["skipped_minibatches"] = skipped
    return out


# --------------------------------------------------------------------------
# acting


class PolicyActor:
    """Runs a network against an episode, pulling quantum features per step."""

    def __init__(self, net: PolicyNetwork, provider: Optional[QuantumFeatureProvider],
                 deterministic: bool = False):
        self.net = net
        self.provider = provider
        self.deterministic = deterministic

    def step(self, obs: ObservationGraph, step: int, rng: np.random.Generator,
             mask: Optional[np.ndarray] = None):
        """``mask`` (legal actions) is applied only if the network was trained with masking."""
        a_hat = obs.normalized_adjacency()
        pooled, _, _ = gcn_forward_batch(obs.node_features[None], a_hat[None], self.net.gcn)
        pooled = pooled[0]
        qvec = None
        if self.net.use_quantum:
            feat = self.provider.feature(step, lambda: self.net.angles(pooled))
            qvec = feat.vector
        _, logits, value = self.net.heads(pooled, qvec)
        if self.net.mask_illegal:
            logits = apply_mask(logits, mask)
        logp_all = log_softmax(logits)
        if self.deterministic:
            action = int(np.argmax(logits))
        else:
            action = int(rng.choice(len(logits), p=np.exp(logp_all)))
        return action, float(logp_all[action]), float(value), a_hat, qvec

    def value(self, obs: ObservationGraph) -> float:
        pooled = self.net.pooled(obs)
        qvec = None
        if self.net.use_quantum:
            last = self.provider.peek()
            qvec = last.vector if last is not None else np.zeros(H2_DIM)
        return float(self.net.heads(pooled, qvec)[2])


# --------------------------------------------------------------------------
# training


@dataclass
class TrainingLog:
    rows: List[dict] = field(default_factory=list)
    final_state: dict = field(default_factory=dict)

    COLUMNS = ("update", "env_steps", "mean_reward", "mean_episode_length", "episodes",
               "backend_calls", "policy_loss", "value_loss", "entropy", "clip_fraction",
               "wall_time")

    def append(self, row: dict):
        self.rows.append(row)

    def deterministic_view(self) -> List[dict]:
        return [{k: v for k, v in r.items() if k != "wall_time"} for r in self.rows]

    def to_csv(self, path):
        import csv
        with Path(path).open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(self.COLUMNS))
            w.writeheader()
            w.writerows(self.rows)


def _sample_outage(rng, n_lines, k):
    if k <= 0:
        return ()
    return tuple(sorted(int(i) for i in rng.choice(n_lines, size=k, replace=False)))


def train(env_factory: Callable[[int], "object"], opponent_cfg: OpponentConfig = OpponentConfig(),
          ppo_cfg: PPOConfig = PPOConfig(), quantum_cfg: QuantumConfig = QuantumConfig(),
          total_steps: int = 50_000, seed: int = 0, outage_k: int = 2,
          checkpoint_path=None, resume: Optional[dict] = None,
          progress: Optional[Callable[[dict], None]] = None):
    """Alternate rollouts and PPO updates for ``total_steps`` environment steps.

    ``env_factory(seed)`` builds a :class:`~qgridrl.grid.env.GridEnv`. Every
    episode starts from a random N-``outage_k`` contingency. Returns
    ``(net, log)``. If the backend fails while no cached value exists, a
    checkpoint is written to ``checkpoint_path`` and :class:`TrainingAborted`
    is raised; pass the checkpoint (via :func:`load_checkpoint`) as ``resume``.
    """
    if total_steps < ppo_cfg.steps_per_rollout:
        raise ValueError("total_steps must be >= steps_per_rollout")
    from .grid.env import node_feature_dim

    env = env_factory(seed)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    in_dim = node_feature_dim(env.spec)
    if resume is not None:
        net = resume["net"]
        net.check(in_dim, env.n_actions)
    else:
        net = PolicyNetwork.init(in_dim, env.n_actions, quantum_cfg.n_qubits,
                                 quantum_cfg.uses_quantum, seed, ppo_cfg.mask_illegal)
    opt = Adam(ppo_cfg.learning_rate)
    provider = quantum_cfg.provider() if quantum_cfg.uses_quantum else None
    log_ = TrainingLog()
    step0 = 0
    if resume is not None:
        opt.load_state_dict(resume["adam"], resume["meta"]["adam_t"])
        step0 = resume["meta"]["env_steps"]
        if provider is not None and resume["meta"].get("provider"):
            provider.load_state_dict(resume["meta"]["provider"])
        rng = np.random.default_rng(np.random.SeedSequence([seed, 1, step0]))
    actor = PolicyActor(net, provider)
    opponent = Opponent(opponent_cfg)
    start = time.perf_counter()

    def new_episode():
        opponent.reset()
        case = _sample_outage(rng, env.n_lines, outage_k)
        obs = env.reset(case, seed=int(rng.integers(2**31)))
        return obs

    obs = new_episode()
    while env.done:
        obs = new_episode()
    ep_len = ep_steps = 0
    global_step = step0
    update = len(log_.rows)
    while global_step < step0 + total_steps:
        n = min(ppo_cfg.steps_per_rollout, step0 + total_steps - global_step)
        xs, adjs, qs, acts, lps, rews, vals, dones, masks = [], [], [], [], [], [], [], [], []
        finished = []
        for _ in range(n):
            try:
                mask = env.legal_mask() if net.mask_illegal else None
                action, logp, value, a_hat, qvec = actor.step(obs, global_step, rng, mask)
            except BackendUnavailableError as exc:
                path = None
                if checkpoint_path is not None:
                    path = save_checkpoint(checkpoint_path, net, config={
                        "ppo": asdict(ppo_cfg), "quantum": asdict(quantum_cfg),
                        "opponent": asdict(opponent_cfg)}, seed=seed,
                        extra={"env_steps": global_step, "adam_t": opt.t,
                               "provider": provider.state_dict() if provider else None},
                        arrays=opt.state_dict())
                raise TrainingAborted(f"quantum backend unavailable at step {global_step}: {exc}",
                                      path) from exc
            res = env.step(action, opponent.attack(env.state))
            xs.append(obs.node_features)
            adjs.append(a_hat)
            if qvec is not None:
                qs.append(qvec)
            if mask is not None:
                masks.append(mask)
            acts.append(action)
            lps.append(logp)
            rews.append(res.reward.total)
            vals.append(value)
            dones.append(res.done)
            global_step += 1
            ep_len += 1
            obs = res.observation
            if res.done:
                finished.append(ep_len)
                ep_len = 0
                obs = new_episode()
                while env.done:
                    finished.append(0)
                    obs = new_episode()
        batch = RolloutBatch(
            np.array(xs), np.array(adjs), np.array(qs) if qs else None,
            np.array(acts), np.array(lps), np.array(rews), np.array(vals),
            np.array(dones, dtype=float), last_value=actor.value(obs),
            masks=np.array(masks) if masks else None,
        )
        stats = ppo_update(net, batch, ppo_cfg, opt, rng)
        update += 1
        row = {
            "update": update,
            "env_steps": global_step,
            "mean_reward": float(np.mean(rews)),
            "mean_episode_length": float(np.mean(finished)) if finished else float("nan"),
            "episodes": len(finished),
            "backend_calls": provider.backend_calls if provider else 0,
            **{k: stats[k] for k in ("policy_loss", "value_loss", "entropy", "clip_fraction")},
            "wall_time": round(time.perf_counter() - start, 3),
        }
        log_.append(row)
        if progress is not None:
            progress(row)
        log.info("update %d steps %d reward %.3f ep_len %.1f", update, global_step,
                 row["mean_reward"], row["mean_episode_length"])
    log_.final_state = {"env_steps": global_step, "adam_t": opt.t,
                        "provider": provider.state_dict() if provider else None,
                        "adam": opt.state_dict()}
    return net, log_


# --------------------------------------------------------------------------
# checkpoints


def save_checkpoint(path, net: PolicyNetwork, config: Optional[dict] = None, seed: int = 0,
                    extra: Optional[dict] = None, arrays: Optional[Dict[str, np.ndarray]] = None):
    """Write weights, config and seed to a ``.npz`` archive.

    Arrays are stored under their parameter names; a JSON string under
    ``__meta__`` carries the format version, config, seed, network layout and
    any ``extra`` training state. Optimizer moments go under ``adam.m.*`` /
    ``adam.v.*``.
    """
    path = Path(path)
    meta = {
        "format": "qgridrl-checkpoint",
        "version": CHECKPOINT_VERSION,
        "seed": seed,
        "use_quantum": net.use_quantum,
        "mask_illegal": net.mask_illegal,
        "in_dim": net.gcn.in_dim,
        "n_actions": net.n_actions,
        "n_qubits": net.n_qubits,
        "config": config or {},
        **(extra or {}),
    }
    payload = {k: v for k, v in net.params().items()}
    payload.update(arrays or {})
    payload["__meta__"] = np.array(json.dumps(meta))
    with path.open("wb") as fh:
        np.savez(fh, **payload)
    return path


def load_checkpoint(path) -> dict:
    """Returns ``{"net", "meta", "adam"}``."""
    with np.load(Path(path), allow_pickle=False) as data:
        meta = json.loads(str(data["__meta__"]))
        if meta.get("format") != "qgridrl-checkpoint":
            raise ShapeError(f"{path} is not a qgridrl checkpoint")
        if meta["version"] > CHECKPOINT_VERSION:
            raise ShapeError(f"checkpoint version {meta['version']} is newer than supported")
        net = PolicyNetwork.init(meta["in_dim"], meta["n_actions"], meta["n_qubits"],
                                 meta["use_quantum"], mask_illegal=meta.get("mask_illegal", False))
        params = {k: data[k].copy() for k in net.params()}
        adam = {k: data[k].copy() for k in data.files if k.startswith("adam.")}
    net.set_params(params)
    net.check()
    return {"net": net, "meta": meta, "adam": adam}
