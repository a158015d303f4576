"""Toy two-view encoder trained with the invariance + sliced-matching objective.

Synthetic cluster data stands in for augmented images: each batch row is an
anchor from a fixed Gaussian mixture observed under two independent noise
corruptions.  The encoder is one or two affine maps with rectification on the
output, trained by SGD with momentum; all gradients are derived by hand.
"""

import json
from dataclasses import dataclass, field, asdict

import numpy as np

from . import _kernels
from .diagnostics import sparsity_metrics, vcreg_diagnostics
from .distributions import (
    RGGParams,
    gn_variance,
    rgn_moments,
    sample_gn,
    sample_rgn,
    sigma_gn,
    sigma_rgn,
)
from .slicing import (
    DEFAULT_LAMBDA_DIST,
    DEFAULT_LAMBDA_SIM,
    LossBreakdown,
    mixed_projections,
    sliced_stat_profile,
)

__all__ = [
    "EncoderModel",
    "TrainConfig",
    "TrainTrace",
    "TrainingDiverged",
    "generate_views",
    "forward",
    "backward",
    "train",
    "compare_projection_policies",
]

N_CLUSTERS = 4


class TrainingDiverged(RuntimeError):
    def __init__(self, step):
        self.step = step
        super().__init__(f"non-finite loss at step {step}")


@dataclass
class EncoderModel:
    """Affine layers (weights w: in x out, biases b: out) with rectified output.

    hidden_rectified applies rectification between layers as well;
    rectify_output=False turns the final nonlinearity off (dense ablation).
    """

    weights: list
    biases: list
    hidden_rectified: bool = True
    rectify_output: bool = True

    @classmethod
    def init(cls, input_dim, hidden_dim, feature_dim, seed,
             hidden_rectified=True, rectify_output=True):
        rng = np.random.default_rng(seed)
        dims = [input_dim, feature_dim] if hidden_dim is None else \
            [input_dim, hidden_dim, feature_dim]
        weights, biases = [], []
        for fan_in, fan_out in zip(dims[:-1], dims[1:]):
            weights.append(rng.standard_normal((fan_in, fan_out)) / np.sqrt(fan_in))
            biases.append(np.zeros(fan_out))
        return cls(weights=weights, biases=biases,
                   hidden_rectified=hidden_rectified, rectify_output=rectify_output)

    @property
    def feature_dim(self):
        return self.weights[-1].shape[1]

    def zeros_like_grads(self):
        return ([np.zeros_like(w) for w in self.weights],
                [np.zeros_like(b) for b in self.biases])

    def save_csv(self, path):
        """Flat CSV: one line per array, shape header then values."""
        with open(path, "w") as fh:
            fh.write(f"hidden_rectified,{int(self.hidden_rectified)}\n")
            fh.write(f"rectify_output,{int(self.rectify_output)}\n")
            for name, arrs in (("w", self.weights), ("b", self.biases)):
                for i, a in enumerate(arrs):
                    shape = "x".join(str(s) for s in a.shape)
                    vals = ",".join(f"{v:.17g}" for v in a.ravel())
                    fh.write(f"{name}{i},{shape},{vals}\n")

    @classmethod
    def load_csv(cls, path):
        weights, biases = {}, {}
        flags = {}
        with open(path) as fh:
            for line in fh:
                parts = line.strip().split(",")
                if parts[0] in ("hidden_rectified", "rectify_output"):
                    flags[parts[0]] = bool(int(parts[1]))
                    continue
                name, shape = parts[0], tuple(int(s) for s in parts[1].split("x"))
                arr = np.array([float(v) for v in parts[2:]]).reshape(shape)
                idx = int(name[1:])
                (weights if name[0] == "w" else biases)[idx] = arr
        return cls(weights=[weights[i] for i in sorted(weights)],
                   biases=[biases[i] for i in sorted(biases)], **flags)


@dataclass
class TrainConfig:
    input_dim: int = 32
    hidden_dim: int | None = 64
    feature_dim: int = 16
    batch: int = 256
    steps: int = 3000
    lambda_sim: float = DEFAULT_LAMBDA_SIM
    lambda_dist: float = DEFAULT_LAMBDA_DIST
    target_p: float = 1.0
    target_mu: float = 0.0
    target_sigma: float | None = None      # resolved via sigma_rule when None
    sigma_rule: str = "gn"                 # "gn" or "rgn"
    target_family: str = "rgn"             # "rgn" or "gn" (dense ablation)
    n_proj: int = 512
    policy: str = "random_sphere"
    learning_rate: float = 0.001
    momentum: float = 0.9
    warmup_steps: int = 100
    seed: int = 0
    noise_scale: float = 0.05
    log_every: int = 100
    hidden_rectified: bool = True
    rectify_output: bool = True

    def resolve_target(self):
        sigma = self.target_sigma
        if sigma is None:
            if self.sigma_rule == "gn":
                sigma = sigma_gn(self.target_p)
            elif self.sigma_rule == "rgn":
                sigma = sigma_rgn(self.target_p, self.target_mu)
            else:
                raise ValueError(f"unknown sigma_rule {self.sigma_rule!r}")
        return RGGParams(self.target_p, self.target_mu, sigma)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            data = json.load(fh)
        return cls(**data)

    def to_dict(self):
        return asdict(self)


@dataclass
class TrainTrace:
    steps: list = field(default_factory=list)
    records: list = field(default_factory=list)

    def append(self, step, record):
        self.steps.append(step)
        self.records.append(record)

    def column(self, key):
        return np.array([r[key] for r in self.records])

    def final(self, key):
        return self.records[-1][key]

    def to_csv(self, path):
        """Tidy long format: step,metric,value."""
        with open(path, "w") as fh:
            fh.write("step,metric,value\n")
            for step, rec in zip(self.steps, self.records):
                for key, val in rec.items():
                    fh.write(f"{step},{key},{val:.17g}\n")


def generate_views(n, input_dim, noise_scale, seed, dataset_seed=0):
    """Two aligned noisy views of n anchors from a fixed 4-cluster mixture.

    The mixture (cluster centers) depends only on dataset_seed; anchor
    assignment and the two independent additive noises come from `seed`.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    centers_rng = np.random.default_rng(dataset_seed)
    centers = centers_rng.standard_normal((N_CLUSTERS, input_dim)) * 2.0
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    assign = rng.integers(0, N_CLUSTERS, size=n)
    anchors = centers[assign] + 0.5 * rng.standard_normal((n, input_dim))
    x = anchors + noise_scale * rng.standard_normal((n, input_dim))
    xprime = anchors + noise_scale * rng.standard_normal((n, input_dim))
    return x, xprime


def _forward_cached(model, x):
    """Forward pass keeping pre-activations for backprop."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    acts = [x]
    preacts = []
    h = x
    n_layers = len(model.weights)
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        if h.shape[1] != w.shape[0]:
            raise ValueError(f"layer {i}: input width {h.shape[1]} != {w.shape[0]}")
        a = h @ w + b
        preacts.append(a)
        last = i == n_layers - 1
        if (last and model.rectify_output) or (not last and model.hidden_rectified):
            h = np.maximum(0.0, a)
        else:
            h = a
        acts.append(h)
    return h, acts, preacts


def forward(model, x):
    """Encoder features for a batch; exact zeros where rectification clamps."""
    z, _, _ = _forward_cached(model, x)
    return z


def _backprop_branch(model, acts, preacts, dz, grads_w, grads_b):
    """Accumulate weight/bias grads for one branch given dL/d(features)."""
    n_layers = len(model.weights)
    da = dz
    for i in range(n_layers - 1, -1, -1):
        last = i == n_layers - 1
        rectified = (last and model.rectify_output) or \
            (not last and model.hidden_rectified)
        if rectified:
            da = da * (preacts[i] > 0)
        grads_w[i] += acts[i].T @ da
        grads_b[i] += da.sum(axis=0)
        if i > 0:
            da = da @ model.weights[i].T


def _dist_grad(z, y, proj):
    """Mean-over-projections sorted-W2 loss and its gradient in z."""
    c = proj.directions
    zp = c @ z.T
    yp = c @ y.T
    losses, gp = _kernels.sorted_w2_grad(zp, yp)
    return float(np.mean(losses)), gp.T @ c / c.shape[0]


def _dist_grad_pair(z, zprime, y, proj):
    """Both views' matching losses and gradients in one fused kernel call."""
    c = proj.directions
    n = c.shape[0]
    yp = c @ y.T
    zp = np.vstack([c @ z.T, c @ zprime.T])
    losses, gp = _kernels.sorted_w2_grad(zp, np.vstack([yp, yp]))
    loss1 = float(np.mean(losses[:n]))
    loss2 = float(np.mean(losses[n:]))
    return loss1, gp[:n].T @ c / n, loss2, gp[n:].T @ c / n


def backward(model, x, xprime, target, proj, lambda_sim=DEFAULT_LAMBDA_SIM,
             lambda_dist=DEFAULT_LAMBDA_DIST, seed=0, target_sample=None,
             target_family="rgn"):
    """Loss breakdown and exact gradients of the total loss in all parameters.

    One target sample Y (drawn from `seed`, or passed frozen) is shared by
    both view terms.  Returns (LossBreakdown, grads_w, grads_b).
    """
    z, acts1, pre1 = _forward_cached(model, x)
    zprime, acts2, pre2 = _forward_cached(model, xprime)
    b, d = z.shape
    if target_sample is None:
        sampler = sample_rgn if target_family == "rgn" else sample_gn
        y = sampler(target, b * d, seed).reshape(b, d)
    else:
        y = target_sample

    invariance = float(np.mean(np.sum((z - zprime) ** 2, axis=1)))
    loss1, g1, loss2, g2 = _dist_grad_pair(z, zprime, y, proj)
    breakdown = LossBreakdown(invariance=invariance, rdmreg_view1=loss1,
                              rdmreg_view2=loss2, lambda_sim=lambda_sim,
                              lambda_dist=lambda_dist)

    dinv = (2.0 / b) * (z - zprime)
    dz = lambda_sim * dinv + lambda_dist * g1
    dzprime = -lambda_sim * dinv + lambda_dist * g2

    grads_w, grads_b = model.zeros_like_grads()
    _backprop_branch(model, acts1, pre1, dz, grads_w, grads_b)
    _backprop_branch(model, acts2, pre2, dzprime, grads_w, grads_b)
    return breakdown, grads_w, grads_b


def _lr_at(step, config):
    base = config.learning_rate
    if config.warmup_steps > 0 and step < config.warmup_steps:
        return base * (step + 1) / config.warmup_steps
    span = max(1, config.steps - config.warmup_steps)
    progress = (step - config.warmup_steps) / span
    return base * 0.5 * (1.0 + np.cos(np.pi * progress))


def _log_record(breakdown, z, target, target_var, config, step_rng):
    report = sparsity_metrics(z)
    var_loss, cov_loss = vcreg_diagnostics(z, target_var)
    profile = sliced_stat_profile(z, target, min(128, config.n_proj),
                                  np.random.default_rng(step_rng))
    return {
        "invariance": breakdown.invariance,
        "rdmreg_view1": breakdown.rdmreg_view1,
        "rdmreg_view2": breakdown.rdmreg_view2,
        "total": breakdown.total,
        "m_l0": report.m_l0,
        "m_l1": report.m_l1 if report.m_l1 is not None else float("nan"),
        "zero_fraction": report.zero_fraction,
        "variance_loss": var_loss,
        "covariance_loss": cov_loss,
        "sliced_stat": profile,
    }


def train(config, model=None):
    """Run SGD with momentum for config.steps; returns (model, trace).

    Deterministic given config.seed: batch noise, target draws, and projection
    directions all derive from per-step child seeds.
    """
    target = config.resolve_target()
    if config.target_family == "rgn":
        target_var = rgn_moments(target).variance
    else:
        target_var = gn_variance(target)
    master = np.random.SeedSequence(config.seed)
    init_seed, data_seed, step_seed = master.spawn(3)
    if model is None:
        model = EncoderModel.init(config.input_dim, config.hidden_dim,
                                  config.feature_dim, init_seed,
                                  hidden_rectified=config.hidden_rectified,
                                  rectify_output=config.rectify_output)
    vel_w = [np.zeros_like(w) for w in model.weights]
    vel_b = [np.zeros_like(b) for b in model.biases]
    trace = TrainTrace()
    step_children = step_seed.spawn(config.steps)
    dataset_seed = data_seed.generate_state(1)[0]

    for step in range(config.steps):
        child = np.random.default_rng(step_children[step])
        x, xprime = generate_views(config.batch, config.input_dim,
                                   config.noise_scale, child,
                                   dataset_seed=dataset_seed)
        z_probe = forward(model, x)
        proj = mixed_projections(z_probe, config.n_proj, config.policy, child)
        breakdown, grads_w, grads_b = backward(
            model, x, xprime, target, proj,
            lambda_sim=config.lambda_sim, lambda_dist=config.lambda_dist,
            seed=child, target_family=config.target_family,
        )
        if not np.isfinite(breakdown.total):
            raise TrainingDiverged(step)
        lr = _lr_at(step, config)
        for i in range(len(model.weights)):
            vel_w[i] = config.momentum * vel_w[i] - lr * grads_w[i]
            vel_b[i] = config.momentum * vel_b[i] - lr * grads_b[i]
            model.weights[i] += vel_w[i]
            model.biases[i] += vel_b[i]
        if step % config.log_every == 0 or step == config.steps - 1:
            z = forward(model, x)
            trace.append(step, _log_record(breakdown, z, target, target_var,
                                           config, child))
    return model, trace


def compare_projection_policies(config, policies=("random_sphere",
                                                  "random_plus_bottom_eig")):
    """Train one model per projection policy with otherwise identical config."""
    from dataclasses import replace
    traces = {}
    for policy in policies:
        _, trace = train(replace(config, policy=policy))
        traces[policy] = trace
    return traces
